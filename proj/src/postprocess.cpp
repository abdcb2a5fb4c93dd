#include "bqpe/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bqpe {

double weighted_circular_mean(std::span<const double> phases, std::span<const double> weights) {
  if (phases.empty() || phases.size() != weights.size()) {
    throw std::invalid_argument("weighted_circular_mean: empty or mismatched inputs");
  }
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    re += weights[i] * std::cos(phases[i]);
    im += weights[i] * std::sin(phases[i]);
  }
  if (re == 0.0 && im == 0.0) {
    // Zero total weight (or exact cancellation): fall back to equal weights.
    for (double p : phases) {
      re += std::cos(p);
      im += std::sin(p);
    }
  }
  return wrap_angle(std::atan2(im, re));
}

double total_variation(std::span<const std::pair<std::int64_t, double>> history, int window) {
  if (window < 2) throw std::invalid_argument("total_variation: window must be >= 2");
  const std::size_t n = history.size();
  if (n < 2) return 0.0;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(window), n);
  double tv = 0.0;
  for (std::size_t i = n - take + 1; i < n; ++i) {
    tv += circular_distance(history[i].second, history[i - 1].second);
  }
  return tv;
}

MatchResult match_to_truth(std::span<const PhaseEstimate> estimates, const GroundTruth& truth) {
  const int t = truth.size();
  MatchResult out;
  out.assignment.resize(estimates.size());
  out.collated_phase.assign(static_cast<std::size_t>(t), std::numeric_limits<double>::quiet_NaN());
  out.collated_weight.assign(static_cast<std::size_t>(t), 0.0);
  out.phase_error.resize(static_cast<std::size_t>(t));
  out.weight_error.resize(static_cast<std::size_t>(t));

  std::vector<std::vector<double>> member_phases(static_cast<std::size_t>(t));
  std::vector<std::vector<double>> member_weights(static_cast<std::size_t>(t));
  for (std::size_t e = 0; e < estimates.size(); ++e) {
    int best = 0;
    double best_dist = circular_distance(estimates[e].phase, truth.phases[0]);
    for (int i = 1; i < t; ++i) {
      const double d = circular_distance(estimates[e].phase, truth.phases[static_cast<std::size_t>(i)]);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    out.assignment[e] = best;
    member_phases[static_cast<std::size_t>(best)].push_back(estimates[e].phase);
    member_weights[static_cast<std::size_t>(best)].push_back(estimates[e].weight);
  }

  for (int i = 0; i < t; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!member_phases[idx].empty()) {
      out.collated_phase[idx] = weighted_circular_mean(member_phases[idx], member_weights[idx]);
      for (double w : member_weights[idx]) out.collated_weight[idx] += w;
      out.phase_error[idx] = circular_distance(out.collated_phase[idx], truth.phases[idx]);
    } else {
      out.phase_error[idx] = kPi;
    }
    out.weight_error[idx] = std::fabs(out.collated_weight[idx] - truth.weights[idx]);
  }
  return out;
}

namespace {

std::vector<PhaseEstimate> bundle_pass(std::vector<PhaseEstimate> estimates, double tau,
                                       bool& merged_any) {
  merged_any = false;
  std::vector<PhaseEstimate> out;
  std::vector<bool> used(estimates.size(), false);
  for (;;) {
    int center = -1;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      if (used[i]) continue;
      if (center < 0 || estimates[i].weight > estimates[static_cast<std::size_t>(center)].weight) {
        center = static_cast<int>(i);
      }
    }
    if (center < 0) break;
    const auto c = static_cast<std::size_t>(center);
    std::vector<double> phases;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      if (used[i]) continue;
      if (circular_distance(estimates[i].phase, estimates[c].phase) <= tau) {
        used[i] = true;
        phases.push_back(estimates[i].phase);
        weights.push_back(estimates[i].weight);
        total += estimates[i].weight;
      }
    }
    PhaseEstimate merged;
    if (phases.size() == 1) {
      // Singleton bundle: keep the estimate bit-identical so a re-filter is a
      // no-op once the fixed point is reached.
      merged.phase = phases[0];
      merged.weight = weights[0];
    } else {
      merged.phase = weighted_circular_mean(phases, weights);
      merged.weight = total;
      merged_any = true;
    }
    merged.history = std::move(estimates[c].history);
    out.push_back(std::move(merged));
  }
  return out;
}

}  // namespace

std::vector<PhaseEstimate> filter_estimates(std::vector<PhaseEstimate> estimates,
                                            double weight_threshold, int tv_window,
                                            double tv_threshold, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("filter_estimates: tau must be >= 0");

  std::vector<PhaseEstimate> kept;
  for (auto& e : estimates) {
    if (e.weight < weight_threshold) continue;
    if (total_variation(e.history, tv_window) > tv_threshold) continue;
    kept.push_back(std::move(e));
  }

  // Greedy bundling can move merged centers toward each other; iterate to a
  // fixed point so the result is idempotent under re-filtering.
  bool merged_any = true;
  while (merged_any && kept.size() > 1) {
    kept = bundle_pass(std::move(kept), tau, merged_any);
  }
  return kept;
}

bool success_check(std::span<const PhaseEstimate> filtered, const GroundTruth& truth, double tol) {
  if (static_cast<int>(filtered.size()) != truth.size()) return false;
  std::vector<bool> hit(static_cast<std::size_t>(truth.size()), false);
  for (const auto& e : filtered) {
    int best = 0;
    double best_dist = circular_distance(e.phase, truth.phases[0]);
    for (int i = 1; i < truth.size(); ++i) {
      const double d = circular_distance(e.phase, truth.phases[static_cast<std::size_t>(i)]);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    if (best_dist > tol) return false;
    if (hit[static_cast<std::size_t>(best)]) return false;  // two estimates claim one truth phase
    hit[static_cast<std::size_t>(best)] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
}

}  // namespace bqpe
