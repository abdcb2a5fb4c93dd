#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bqpe/engine.hpp"
#include "bqpe/postprocess.hpp"

namespace bqpe {

/// Ground-truth construction for a batch: explicit phases/weights, the
/// three-phase benchmark with random spurious extras, or random perturbations
/// of a pi/6 grid.
struct TruthSpec {
  enum class Mode { Explicit, Spurious, Grid };
  Mode mode = Mode::Explicit;
  std::vector<double> phases = {2.0, 4.0};   // Explicit (weights normalized)
  std::vector<double> weights = {0.7, 0.3};
  int spurious_count = 2;  ///< Spurious: extras sharing total weight 0.1
  int grid_count = 3;      ///< Grid: phases at pi/12 + i*pi/6 (<= 12)
};

GroundTruth generate_truth(const TruthSpec& spec, Xoshiro256StarStar& rng);

struct BatchConfig {
  EstimatorConfig estimator;  ///< per-trial seed is derived from estimator.seed
  TruthSpec truth;
  int trials = 10;
  int threads = 0;  ///< 0 = all hardware threads
  std::string out_dir = "out";
  /// Iteration whose posterior means fix the estimate-to-truth assignment for
  /// the aggregate error curves (snapped to the snapshot grid); -1 = final.
  std::int64_t ref_iteration = -1;
  // Post-filter parameters applied to each trial's final estimates.
  double weight_threshold = 1e-3;
  int tv_window = 50;
  double tv_threshold = 0.5;
  double tau_degrees = 3.0;
  double success_tol = 0.005;
};

struct TrialResult {
  std::uint64_t seed = 0;
  TrajectoryLog log;
  std::vector<PhaseEstimate> filtered;
  bool success = false;
  double wall_ms = 0.0;
};

struct BatchResult {
  GroundTruth truth;
  std::vector<TrialResult> trials;
  std::vector<std::string> trial_csv_paths;
  std::string aggregate_csv_path;
  std::string summary_path;
};

/// Run `trials` independent trials of the estimator against one generated
/// truth, in parallel, and write per-trial trajectory CSVs, the aggregate
/// median-error CSV and a human-readable run summary into out_dir. All CSV
/// output is a pure function of the configuration and master seed (trial i
/// uses stream i of the master seed; truth generation uses stream 2^62), so
/// reruns and different thread counts produce byte-identical CSV files.
BatchResult run_batch(const BatchConfig& config);

/// Stream index reserved for truth generation.
inline constexpr std::uint64_t kTruthStreamIndex = 1ULL << 62;

/// Doubles are printed with "%.17g" so text round-trips reproduce the exact
/// binary value; the aggregate file can be recomputed from the trial files.
std::string format_double(double v);

/// Sigma as reported in CSVs: a component whose weight has collapsed below
/// 1e-12 reports the flat-line sentinel 20.
double reported_sigma(double weight, double sigma);

}  // namespace bqpe
