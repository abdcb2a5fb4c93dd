#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "bqpe/simulator.hpp"
#include "bqpe/weight_solver.hpp"
#include "bqpe/wrapped_normal.hpp"

namespace bqpe {

/// Representation policy for the phase posteriors.
enum class ReprMode { FourierOnly, NormalOnly, Mixed };

/// One mixture component's posterior, in whichever representation it
/// currently uses.
struct PhaseDistribution {
  std::variant<FourierSeries, WrappedNormal> repr;
  std::optional<std::int64_t> switch_iteration;  ///< set when Fourier -> Normal

  bool is_fourier() const { return std::holds_alternative<FourierSeries>(repr); }
  const FourierSeries& series() const { return std::get<FourierSeries>(repr); }
  const WrappedNormal& normal() const { return std::get<WrappedNormal>(repr); }
};

struct EstimatorConfig {
  int num_distributions = 5;
  ReprMode mode = ReprMode::Mixed;
  int n_max = 200;
  double epsilon = 1e-4;   ///< pointwise tolerance defining the switch threshold
  double init_sigma = 3.0;
  /// Prior means; empty -> equally spaced at 2*pi*(j + 1/2)/m.
  std::vector<double> init_means;
  SchemeSpec scheme;
  NoiseModel noise = IdealNoise{};
  std::int64_t iterations = 10000;
  std::int64_t weight_schedule_period = 512;
  SolveOptions solver;
  std::uint64_t seed = 1;
  int snapshots_per_decade = 50;
  bool snapshot_every_iteration = false;
};

/// Point-in-time view of one posterior component.
struct ComponentSnapshot {
  double mean;
  double sigma;
  char repr;  ///< 'F' or 'N'
};

struct Snapshot {
  std::int64_t iteration;
  std::vector<ComponentSnapshot> components;
  std::vector<double> weights;
  std::vector<int> k;  ///< exponents of the design used at this iteration
};

struct TrajectoryLog {
  std::vector<Snapshot> snapshots;
  std::optional<std::int64_t> divergence_iteration;
  std::vector<std::optional<std::int64_t>> switch_iterations;  // per component
  std::int64_t degenerate_refits = 0;
};

/// Log-spaced snapshot grid: iteration 0, round(10^(j/per_decade)) for j >= 0,
/// and the final iteration, deduplicated and clipped to [0, budget].
std::vector<std::int64_t> snapshot_iterations(std::int64_t budget, int per_decade);

/// Bayesian multi-eigenphase estimator: a mixture of per-phase posteriors with
/// maximum-likelihood mixture weights refreshed on an exponential schedule.
class Estimator {
 public:
  explicit Estimator(const EstimatorConfig& config);

  /// Absorb one measurement record: per-distribution posterior update with
  /// shared-background mixing, then representation switches (Mixed mode), then
  /// ledger append and (if scheduled) a weight solve. Throws numeric_error on
  /// update breakdown, leaving the pre-update state intact.
  void step(const ExperimentDesign& design, const MeasurementRecord& m);

  /// Run the full experiment loop against a simulated ground truth, recording
  /// snapshots. On breakdown the state freezes and the divergence iteration is
  /// logged; remaining grid points snapshot the frozen state.
  TrajectoryLog run(const GroundTruth& truth);

  const EstimatorConfig& config() const { return config_; }
  std::int64_t iteration() const { return iteration_; }
  double sigma_crit() const { return sigma_crit_; }
  int num_distributions() const { return static_cast<int>(distributions_.size()); }
  const PhaseDistribution& distribution(int j) const;
  std::span<const double> weights() const { return weights_; }
  const LikelihoodLedger& ledger() const { return ledger_; }
  std::int64_t degenerate_refits() const { return degenerate_refits_; }

  /// Mean/sigma/representation summary of component j; a Fourier component
  /// with undefined moments reports mean pi and sigma +inf.
  ComponentSnapshot component_summary(int j) const;

  /// Likelihood mass <P_j, L> of component j against a likelihood series.
  double component_likelihood_mass(int j, const FourierSeries& likelihood) const;

 private:
  FourierSeries likelihood_for(const ExperimentDesign& design, const MeasurementRecord& m) const;
  Snapshot make_snapshot(std::int64_t iteration, const std::vector<int>& k) const;

  EstimatorConfig config_;
  double sigma_crit_;
  std::vector<PhaseDistribution> distributions_;
  std::vector<double> weights_;
  LikelihoodLedger ledger_;
  std::int64_t iteration_ = 0;
  std::int64_t degenerate_refits_ = 0;
};

}  // namespace bqpe
