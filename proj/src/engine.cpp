#include "bqpe/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bqpe/angles.hpp"
#include "bqpe/errors.hpp"

namespace bqpe {

std::vector<std::int64_t> snapshot_iterations(std::int64_t budget, int per_decade) {
  if (budget < 0) throw std::invalid_argument("snapshot_iterations: budget must be >= 0");
  if (per_decade < 1) throw std::invalid_argument("snapshot_iterations: per_decade must be >= 1");
  std::vector<std::int64_t> grid = {0};
  for (int j = 0;; ++j) {
    const double v = std::pow(10.0, static_cast<double>(j) / per_decade);
    const auto it = static_cast<std::int64_t>(std::llround(v));
    if (it > budget) break;
    grid.push_back(it);
  }
  grid.push_back(budget);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

Estimator::Estimator(const EstimatorConfig& config)
    : config_(config),
      sigma_crit_(critical_sigma(config.n_max, config.epsilon)),
      ledger_(config.num_distributions) {
  if (config.num_distributions < 1) {
    throw std::invalid_argument("Estimator: num_distributions must be >= 1");
  }
  if (config.n_max < 1) throw std::invalid_argument("Estimator: n_max must be >= 1");
  if (!(config.init_sigma > 0.0)) throw std::invalid_argument("Estimator: init_sigma must be > 0");
  if (config.iterations < 0) throw std::invalid_argument("Estimator: iterations must be >= 0");
  if (config.weight_schedule_period < 1) {
    throw std::invalid_argument("Estimator: weight_schedule_period must be >= 1");
  }
  const int m = config.num_distributions;
  if (!config_.init_means.empty() && static_cast<int>(config_.init_means.size()) != m) {
    throw std::invalid_argument("Estimator: init_means length must match num_distributions");
  }

  distributions_.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double mean = config_.init_means.empty()
                            ? kTwoPi * (j + 0.5) / m
                            : wrap_angle(config_.init_means[static_cast<std::size_t>(j)]);
    const WrappedNormal prior{mean, config.init_sigma};
    PhaseDistribution dist;
    if (config.mode == ReprMode::NormalOnly) {
      dist.repr = prior;
    } else {
      dist.repr = to_fourier(prior, config.n_max);
    }
    distributions_.push_back(std::move(dist));
  }
  weights_.assign(static_cast<std::size_t>(m), 1.0 / m);
}

const PhaseDistribution& Estimator::distribution(int j) const {
  if (j < 0 || j >= num_distributions()) throw std::out_of_range("Estimator: component index");
  return distributions_[static_cast<std::size_t>(j)];
}

double Estimator::component_likelihood_mass(int j, const FourierSeries& likelihood) const {
  const PhaseDistribution& dist = distribution(j);
  if (dist.is_fourier()) return inner_product(dist.series(), likelihood);
  return normal_expectation(dist.normal(), likelihood);
}

ComponentSnapshot Estimator::component_summary(int j) const {
  const PhaseDistribution& dist = distribution(j);
  if (!dist.is_fourier()) return {dist.normal().mu, dist.normal().sigma, 'N'};
  CircularMoments m;
  if (!try_moments(dist.series(), m)) {
    return {kPi, std::numeric_limits<double>::infinity(), 'F'};
  }
  return {m.mean, std::sqrt(std::max(m.holevo_variance, 0.0)), 'F'};
}

FourierSeries Estimator::likelihood_for(const ExperimentDesign& design,
                                        const MeasurementRecord& m) const {
  if (design.mode == ExperimentDesign::Mode::Qft) {
    double p = 0.0;
    if (const auto* ro = std::get_if<ReadOutNoise>(&config_.noise)) p = ro->p;
    else if (!std::holds_alternative<IdealNoise>(config_.noise)) {
      throw std::invalid_argument("Estimator: Qft designs support Ideal/ReadOut noise only");
    }
    return qft_likelihood(design.rounds(), m, p);
  }
  return likelihood_series(design, m, config_.noise);
}

void Estimator::step(const ExperimentDesign& design, const MeasurementRecord& m) {
  const int n = num_distributions();
  const FourierSeries likelihood = likelihood_for(design, m);

  // Likelihood mass of each prior component; these also feed the weight ledger.
  std::vector<double> mass(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double c = component_likelihood_mass(j, likelihood);
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw numeric_error("step: nonpositive likelihood mass (posterior left Fourier domain)");
    }
    mass[static_cast<std::size_t>(j)] = c;
  }
  double marginal = 0.0;
  for (int j = 0; j < n; ++j) {
    marginal += mass[static_cast<std::size_t>(j)] * weights_[static_cast<std::size_t>(j)];
  }
  if (!(marginal > 0.0) || !std::isfinite(marginal)) {
    throw numeric_error("step: update breakdown, marginal nonpositive or non-finite");
  }

  // Stage all updates before committing so a breakdown never half-applies.
  std::vector<PhaseDistribution> updated(distributions_);
  std::int64_t degenerate = 0;
  for (int j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    const double own = weights_[i];
    const double background = std::max(marginal - mass[i] * own, 0.0);
    PhaseDistribution& dist = updated[i];
    if (dist.is_fourier()) {
      FourierSeries next = add_scaled(dist.series(), background / marginal,
                                      multiply(dist.series(), likelihood), own / marginal);
      next = truncate(next, config_.n_max);
      dist.repr = normalize(next);  // throws numeric_error when mass went nonpositive
    } else {
      const PosteriorMoment pm =
          posterior_moment(dist.normal(), likelihood, background, own, marginal);
      if (pm.degenerate) ++degenerate;
      dist.repr = WrappedNormal{pm.mu, pm.sigma};
    }
  }

  const std::int64_t now = iteration_ + 1;

  // Representation switches happen after the update, from the posterior shape.
  if (config_.mode == ReprMode::Mixed) {
    for (auto& dist : updated) {
      if (!dist.is_fourier()) continue;
      CircularMoments mom;
      if (!try_moments(dist.series(), mom)) continue;
      const double sigma = std::sqrt(std::max(mom.holevo_variance, 0.0));
      if (sigma < sigma_crit_) {
        dist.repr = WrappedNormal{mom.mean, std::max(sigma, 1e-12)};
        dist.switch_iteration = now;
      }
    }
  }

  distributions_ = std::move(updated);
  degenerate_refits_ += degenerate;
  ledger_.append(mass);
  iteration_ = now;

  if (should_solve(iteration_, config_.weight_schedule_period) && n > 1) {
    weights_ = solve_weights(ledger_, weights_, config_.solver);
  }
}

Snapshot Estimator::make_snapshot(std::int64_t iteration, const std::vector<int>& k) const {
  Snapshot snap;
  snap.iteration = iteration;
  snap.components.reserve(distributions_.size());
  for (int j = 0; j < num_distributions(); ++j) snap.components.push_back(component_summary(j));
  snap.weights = weights_;
  snap.k = k;
  return snap;
}

TrajectoryLog Estimator::run(const GroundTruth& truth) {
  TrajectoryLog log;
  const std::vector<std::int64_t> grid =
      config_.snapshot_every_iteration
          ? [&] {
              std::vector<std::int64_t> all(static_cast<std::size_t>(config_.iterations) + 1);
              for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int64_t>(i);
              return all;
            }()
          : snapshot_iterations(config_.iterations, config_.snapshots_per_decade);

  Xoshiro256StarStar rng(config_.seed);
  DesignSchedule schedule(config_.scheme);
  std::vector<int> last_k;
  std::size_t grid_pos = 0;

  if (grid_pos < grid.size() && grid[grid_pos] == 0) {
    log.snapshots.push_back(make_snapshot(0, last_k));
    ++grid_pos;
  }

  bool frozen = false;
  std::vector<ComponentSummary> summary(distributions_.size());
  for (std::int64_t it = 1; it <= config_.iterations; ++it) {
    if (!frozen) {
      for (int j = 0; j < num_distributions(); ++j) {
        const ComponentSnapshot s = component_summary(j);
        summary[static_cast<std::size_t>(j)] = {weights_[static_cast<std::size_t>(j)], s.sigma};
      }
      const ExperimentDesign design = schedule.next(summary, rng);
      const MeasurementRecord m = simulate_experiment(design, truth, config_.noise, rng);
      last_k = design.k;
      try {
        step(design, m);
      } catch (const numeric_error&) {
        // Expected failure mode of an over-concentrated truncated posterior:
        // freeze the last valid state and keep logging it.
        log.divergence_iteration = it;
        frozen = true;
      }
    }
    if (grid_pos < grid.size() && grid[grid_pos] == it) {
      log.snapshots.push_back(make_snapshot(it, last_k));
      ++grid_pos;
    }
  }

  log.switch_iterations.reserve(distributions_.size());
  for (const auto& dist : distributions_) log.switch_iterations.push_back(dist.switch_iteration);
  log.degenerate_refits = degenerate_refits_;
  return log;
}

}  // namespace bqpe
