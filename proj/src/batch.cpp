#include "bqpe/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "bqpe/angles.hpp"

namespace bqpe {

GroundTruth generate_truth(const TruthSpec& spec, Xoshiro256StarStar& rng) {
  std::vector<double> phases;
  std::vector<double> weights;
  switch (spec.mode) {
    case TruthSpec::Mode::Explicit: {
      phases = spec.phases;
      weights = spec.weights;
      if (phases.empty() || phases.size() != weights.size()) {
        throw std::invalid_argument("generate_truth: explicit phases/weights mismatch");
      }
      break;
    }
    case TruthSpec::Mode::Spurious: {
      phases = {2.0, 4.0, 5.0};
      weights = {0.45, 0.27, 0.18};
      if (spec.spurious_count < 0) throw std::invalid_argument("generate_truth: spurious_count < 0");
      std::vector<double> raw(static_cast<std::size_t>(spec.spurious_count));
      for (int i = 0; i < spec.spurious_count; ++i) {
        phases.push_back(rng.uniform(0.0, kTwoPi));
        raw[static_cast<std::size_t>(i)] = rng.uniform();
      }
      double raw_total = 0.0;
      for (double r : raw) raw_total += r;
      for (double r : raw) weights.push_back(raw_total > 0.0 ? 0.1 * r / raw_total : 0.0);
      break;
    }
    case TruthSpec::Mode::Grid: {
      if (spec.grid_count < 1 || spec.grid_count > 12) {
        throw std::invalid_argument("generate_truth: grid_count must be 1..12");
      }
      for (int i = 0; i < spec.grid_count; ++i) {
        phases.push_back(kPi / 12.0 + i * kPi / 6.0 + rng.uniform(-0.05, 0.05));
      }
      for (int i = 0; i < spec.grid_count; ++i) weights.push_back(rng.uniform(0.5, 1.0));
      break;
    }
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("generate_truth: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("generate_truth: weights must have positive total");
  for (double& w : weights) w /= total;
  return GroundTruth(std::move(phases), std::move(weights));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double reported_sigma(double weight, double sigma) { return weight < 1e-12 ? 20.0 : sigma; }

namespace {

std::vector<PhaseEstimate> final_estimates(const TrajectoryLog& log) {
  const Snapshot& last = log.snapshots.back();
  std::vector<PhaseEstimate> estimates(last.components.size());
  for (std::size_t j = 0; j < last.components.size(); ++j) {
    estimates[j].phase = last.components[j].mean;
    estimates[j].weight = last.weights[j];
    estimates[j].history.reserve(log.snapshots.size());
    for (const Snapshot& snap : log.snapshots) {
      estimates[j].history.emplace_back(snap.iteration, snap.components[j].mean);
    }
  }
  return estimates;
}

std::size_t reference_snapshot(const TrajectoryLog& log, std::int64_t ref_iteration) {
  if (ref_iteration < 0) return log.snapshots.size() - 1;
  std::size_t best = 0;
  std::int64_t best_gap = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < log.snapshots.size(); ++i) {
    const std::int64_t gap = std::llabs(log.snapshots[i].iteration - ref_iteration);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

/// Assignment of each component to its circularly nearest truth phase, from
/// the means recorded at the reference snapshot.
std::vector<int> reference_assignment(const Snapshot& snap, const GroundTruth& truth) {
  std::vector<int> assignment(snap.components.size());
  for (std::size_t j = 0; j < snap.components.size(); ++j) {
    int best = 0;
    double best_dist = circular_distance(snap.components[j].mean, truth.phases[0]);
    for (int i = 1; i < truth.size(); ++i) {
      const double d =
          circular_distance(snap.components[j].mean, truth.phases[static_cast<std::size_t>(i)]);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    assignment[j] = best;
  }
  return assignment;
}

struct CollatedErrors {
  std::vector<double> phase_error;   // per truth phase
  std::vector<double> weight_error;  // per truth phase
};

CollatedErrors collate_at(const Snapshot& snap, const std::vector<int>& assignment,
                          const GroundTruth& truth) {
  CollatedErrors out;
  out.phase_error.resize(static_cast<std::size_t>(truth.size()));
  out.weight_error.resize(static_cast<std::size_t>(truth.size()));
  for (int i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(i);
    std::vector<double> phases;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t j = 0; j < assignment.size(); ++j) {
      if (assignment[j] != i) continue;
      phases.push_back(snap.components[j].mean);
      weights.push_back(snap.weights[j]);
      total += snap.weights[j];
    }
    if (phases.empty()) {
      out.phase_error[t] = kPi;  // unmatched truth phase: maximally wrong
    } else {
      out.phase_error[t] =
          circular_distance(weighted_circular_mean(phases, weights), truth.phases[t]);
    }
    out.weight_error[t] = std::fabs(total - truth.weights[t]);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void write_trial_csv(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("run_batch: cannot open " + path);
  out << "iteration,dist_id,repr,mean,sigma,weight,k1\n";
  for (const Snapshot& snap : log.snapshots) {
    const int k1 = snap.k.empty() ? 0 : snap.k.front();
    for (std::size_t j = 0; j < snap.components.size(); ++j) {
      const ComponentSnapshot& c = snap.components[j];
      out << snap.iteration << ',' << j << ',' << c.repr << ',' << format_double(c.mean) << ','
          << format_double(reported_sigma(snap.weights[j], c.sigma)) << ','
          << format_double(snap.weights[j]) << ',' << k1 << '\n';
    }
  }
}

void write_aggregate_csv(const std::string& path, const std::vector<TrialResult>& trials,
                         const GroundTruth& truth, std::int64_t ref_iteration) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("run_batch: cannot open " + path);
  out << "iteration,median_phase_error,median_sigma,median_weight_error\n";
  if (trials.empty()) return;

  std::vector<std::vector<int>> assignments(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const TrajectoryLog& log = trials[t].log;
    assignments[t] = reference_assignment(
        log.snapshots[reference_snapshot(log, ref_iteration)], truth);
  }

  const std::size_t snaps = trials.front().log.snapshots.size();
  for (std::size_t s = 0; s < snaps; ++s) {
    std::vector<double> phase_errors;
    std::vector<double> sigmas;
    std::vector<double> weight_errors;
    for (std::size_t t = 0; t < trials.size(); ++t) {
      const Snapshot& snap = trials[t].log.snapshots[s];
      const CollatedErrors errs = collate_at(snap, assignments[t], truth);
      phase_errors.insert(phase_errors.end(), errs.phase_error.begin(), errs.phase_error.end());
      weight_errors.insert(weight_errors.end(), errs.weight_error.begin(), errs.weight_error.end());
      for (std::size_t j = 0; j < snap.components.size(); ++j) {
        sigmas.push_back(reported_sigma(snap.weights[j], snap.components[j].sigma));
      }
    }
    out << trials.front().log.snapshots[s].iteration << ',' << format_double(median(phase_errors))
        << ',' << format_double(median(sigmas)) << ',' << format_double(median(weight_errors))
        << '\n';
  }
}

void write_summary(const std::string& path, const BatchConfig& config, const GroundTruth& truth,
                   const std::vector<TrialResult>& trials) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("run_batch: cannot open " + path);
  out << "run summary\n===========\n\nconfig\n";
  out << "  trials = " << config.trials << "\n";
  out << "  iterations = " << config.estimator.iterations << "\n";
  out << "  num_dists = " << config.estimator.num_distributions << "\n";
  const char* mode = config.estimator.mode == ReprMode::FourierOnly  ? "fourier"
                     : config.estimator.mode == ReprMode::NormalOnly ? "normal"
                                                                     : "mixed";
  out << "  mode = " << mode << "\n";
  out << "  n_max = " << config.estimator.n_max << "\n";
  out << "  epsilon = " << format_double(config.estimator.epsilon) << "\n";
  out << "  seed = " << config.estimator.seed << "\n";
  out << "  weight_schedule_T = " << config.estimator.weight_schedule_period << "\n";
  out << "\ntruth\n  phases =";
  for (double p : truth.phases) out << ' ' << format_double(p);
  out << "\n  weights =";
  for (double w : truth.weights) out << ' ' << format_double(w);
  out << "\n\ntrials\n";
  int successes = 0;
  double total_ms = 0.0;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const TrialResult& r = trials[t];
    successes += r.success ? 1 : 0;
    total_ms += r.wall_ms;
    out << "  trial " << t << ": seed=" << r.seed << " success=" << (r.success ? "yes" : "no")
        << " divergence=";
    if (r.log.divergence_iteration) out << *r.log.divergence_iteration;
    else out << '-';
    out << " switches=[";
    for (std::size_t j = 0; j < r.log.switch_iterations.size(); ++j) {
      if (j) out << ' ';
      if (r.log.switch_iterations[j]) out << *r.log.switch_iterations[j];
      else out << '-';
    }
    out << "] wall_ms=" << format_double(r.wall_ms) << "\n";
    out << "    estimates:";
    for (const PhaseEstimate& e : r.filtered) {
      out << " (" << format_double(e.phase) << ", " << format_double(e.weight) << ")";
    }
    out << "\n";
  }
  out << "\ntotals\n  successes = " << successes << "/" << trials.size() << "\n";
  out << "  total_wall_ms = " << format_double(total_ms) << "\n";
}

}  // namespace

BatchResult run_batch(const BatchConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("run_batch: trials must be >= 1");

  BatchResult result;
  {
    Xoshiro256StarStar truth_rng(derive_stream_seed(config.estimator.seed, kTruthStreamIndex));
    result.truth = generate_truth(config.truth, truth_rng);
  }

  result.trials.resize(static_cast<std::size_t>(config.trials));
  const double tau = config.tau_degrees * kPi / 180.0;

  std::atomic<int> next_trial{0};
  auto worker = [&] {
    for (;;) {
      const int t = next_trial.fetch_add(1);
      if (t >= config.trials) return;
      TrialResult& r = result.trials[static_cast<std::size_t>(t)];
      EstimatorConfig cfg = config.estimator;
      cfg.seed = derive_stream_seed(config.estimator.seed, static_cast<std::uint64_t>(t));
      r.seed = cfg.seed;
      const auto start = std::chrono::steady_clock::now();
      Estimator estimator(cfg);
      r.log = estimator.run(result.truth);
      r.filtered = filter_estimates(final_estimates(r.log), config.weight_threshold,
                                    config.tv_window, config.tv_threshold, tau);
      r.success = success_check(r.filtered, result.truth, config.success_tol);
      r.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start).count();
    }
  };

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, config.trials));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::filesystem::create_directories(config.out_dir);
  for (int t = 0; t < config.trials; ++t) {
    const std::string path = config.out_dir + "/trial_" + std::to_string(t) + ".csv";
    write_trial_csv(path, result.trials[static_cast<std::size_t>(t)].log);
    result.trial_csv_paths.push_back(path);
  }
  result.aggregate_csv_path = config.out_dir + "/aggregate.csv";
  write_aggregate_csv(result.aggregate_csv_path, result.trials, result.truth, config.ref_iteration);
  result.summary_path = config.out_dir + "/summary.txt";
  write_summary(result.summary_path, config, result.truth, result.trials);
  return result;
}

}  // namespace bqpe
