#pragma once

#include <span>
#include <vector>

#include "bqpe/likelihood.hpp"
#include "bqpe/rng.hpp"

namespace bqpe {

/// Mixture of eigenphases the simulator draws from: phases in [0, 2*pi),
/// weights nonnegative and summing to 1 (validated on construction).
struct GroundTruth {
  std::vector<double> phases;
  std::vector<double> weights;

  GroundTruth() = default;
  GroundTruth(std::vector<double> phases, std::vector<double> weights);
  int size() const { return static_cast<int>(phases.size()); }
};

/// Weight and spread of one posterior component, as consumed by the adaptive
/// exponent rule.
struct ComponentSummary {
  double weight;
  double sigma;  ///< Holevo deviation; +inf when undefined (flat component)
};

/// Experiment-design schedules.
struct SchemeSpec {
  enum class Kind { Fixed, Cyclic, Adaptive, AdaptiveCyclic, Qft };
  Kind kind = Kind::Fixed;
  std::vector<int> fixed_k = {1};  ///< Fixed: exponents of every experiment
  int c_max = 10;                  ///< Cyclic: k cycles through 1..c_max
  int k_max = 4096;                ///< Adaptive variants: exponent cap
  int qft_rounds = 5;              ///< Qft: rounds per experiment (<= 8)
};

/// Iterator over designs for one trial. Cyclic kinds keep a cycle position;
/// AdaptiveCyclic re-evaluates its cycle length from the posterior summary at
/// each cycle boundary. Phase shifts beta are drawn uniformly from [0, 2*pi)
/// for every non-Qft round.
class DesignSchedule {
 public:
  explicit DesignSchedule(const SchemeSpec& spec);

  ExperimentDesign next(std::span<const ComponentSummary> posterior, Xoshiro256StarStar& rng);

  /// ceil( sum_j 1.25 * w_j / sigma_j ), clamped to [1, k_max].
  static int adaptive_exponent(std::span<const ComponentSummary> posterior, int k_max);

 private:
  SchemeSpec spec_;
  int cycle_pos_ = 0;
  int cycle_len_ = 0;  // AdaptiveCyclic: current cycle length, set at boundaries
};

/// Sample one measurement record from the true mixture:
/// draw an eigenphase, sample each round's bit from the Born rule, then apply
/// the noise channel (Depolarizing: replace the whole record by uniform bits
/// with probability 1 - exp(-total_k/k_err); ReadOut: flip each bit with
/// probability p). Qft-mode designs sample rounds sequentially with feedback
/// computed from the true bits and accept Ideal or ReadOut noise only.
MeasurementRecord simulate_experiment(const ExperimentDesign& design, const GroundTruth& truth,
                                      const NoiseModel& noise, Xoshiro256StarStar& rng);

}  // namespace bqpe
