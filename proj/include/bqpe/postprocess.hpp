#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bqpe/angles.hpp"
#include "bqpe/simulator.hpp"

namespace bqpe {

/// One reported phase estimate: a location, its mixture weight, and the recent
/// (iteration, phase) history used by the stability filter.
struct PhaseEstimate {
  double phase = 0.0;
  double weight = 0.0;
  std::vector<std::pair<std::int64_t, double>> history;
};

/// Weighted circular mean via the argument of the weight-summed unit phasors.
/// Falls back to the unweighted mean when the total weight is zero. Requires a
/// nonempty input.
double weighted_circular_mean(std::span<const double> phases, std::span<const double> weights);

/// Sum of circular absolute differences between successive phases over the
/// last `window` recorded values (0 when fewer than two values).
double total_variation(std::span<const std::pair<std::int64_t, double>> history, int window);

/// Result of collating estimates against a known truth: each estimate is
/// assigned to its circularly nearest truth phase; per truth phase the
/// assigned weights are summed and the phases combined by relative-weight
/// circular mean. A truth phase with no assigned estimate gets collated weight
/// 0, phase error pi (maximally wrong) and weight error equal to its weight.
struct MatchResult {
  std::vector<int> assignment;          ///< estimate index -> truth index
  std::vector<double> collated_phase;   ///< per truth phase (NaN if unmatched)
  std::vector<double> collated_weight;  ///< per truth phase
  std::vector<double> phase_error;      ///< circular distance to truth
  std::vector<double> weight_error;     ///< |collated - true|
};
MatchResult match_to_truth(std::span<const PhaseEstimate> estimates, const GroundTruth& truth);

/// Three-stage post-filter:
///  1. drop estimates with weight < weight_threshold,
///  2. drop estimates whose recent total variation exceeds tv_threshold,
///  3. greedily bundle the survivors: repeatedly center on the highest-weight
///     unbundled estimate, absorb everything within tau, and replace the
///     bundle by its weight-summed, weighted-circular-mean estimate (carrying
///     the center's history); repeated until no bundle absorbs a neighbor, so
///     the output is stable under re-filtering.
std::vector<PhaseEstimate> filter_estimates(std::vector<PhaseEstimate> estimates,
                                            double weight_threshold, int tv_window,
                                            double tv_threshold, double tau);

/// True when the filtered estimates identify the truth exactly: equal counts,
/// nearest-truth assignment is a bijection, and every deviation is <= tol.
bool success_check(std::span<const PhaseEstimate> filtered, const GroundTruth& truth, double tol);

}  // namespace bqpe
