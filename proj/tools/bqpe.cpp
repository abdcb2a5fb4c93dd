// Command-line driver: configure a batch of simulated multi-eigenphase
// estimation trials, run them, and write trajectory/aggregate CSVs plus a run
// summary. Every flag can also be given as a key=value line in a config file
// (--config); command-line flags win over file values.

#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bqpe/batch.hpp"

namespace {

bqpe::SchemeSpec::Kind parse_scheme(const std::string& name) {
  using Kind = bqpe::SchemeSpec::Kind;
  static const std::map<std::string, Kind> table = {
      {"fixed", Kind::Fixed},
      {"cyclic", Kind::Cyclic},
      {"adaptive", Kind::Adaptive},
      {"adaptive-cyclic", Kind::AdaptiveCyclic},
      {"qft", Kind::Qft},
  };
  return table.at(name);
}

bqpe::ReprMode parse_mode(const std::string& name) {
  if (name == "fourier") return bqpe::ReprMode::FourierOnly;
  if (name == "normal") return bqpe::ReprMode::NormalOnly;
  return bqpe::ReprMode::Mixed;
}

bqpe::TruthSpec::Mode parse_truth(const std::string& name) {
  if (name == "spurious") return bqpe::TruthSpec::Mode::Spurious;
  if (name == "grid") return bqpe::TruthSpec::Mode::Grid;
  return bqpe::TruthSpec::Mode::Explicit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian multi-eigenphase estimation simulator"};
  app.set_config("--config", "", "key=value config file; flags override file values");

  std::string truth_mode = "explicit";
  std::vector<double> phases = {2.0, 4.0};
  std::vector<double> weights = {0.7, 0.3};
  int spurious_count = 2;
  int grid_count = 3;
  int num_dists = 5;
  std::string mode = "mixed";
  int n_max = 200;
  double epsilon = 1e-4;
  double init_sigma = 3.0;
  std::string scheme = "fixed";
  std::vector<int> k_list = {1, 2, 5};
  int c_max = 10;
  int k_max = 4096;
  int rounds = 5;
  std::string noise = "ideal";
  double k_err = 1000.0;
  double readout_p = 0.1;
  int trials = 10;
  std::int64_t iterations = 10000;
  std::uint64_t seed = 1;
  std::int64_t schedule_period = 512;
  bool single_projection = false;
  std::string out_dir = "out";
  std::int64_t ref_iteration = -1;
  int threads = 0;
  int snapshots_per_decade = 50;
  double weight_threshold = 1e-3;
  int tv_window = 50;
  double tv_threshold = 0.5;
  double tau_degrees = 3.0;
  double success_tol = 0.005;

  app.add_option("--truth", truth_mode, "Truth generator: explicit, spurious, grid")
      ->check(CLI::IsMember({"explicit", "spurious", "grid"}))
      ->capture_default_str();
  app.add_option("--phases", phases, "Explicit truth phases (radians)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--weights", weights, "Explicit truth weights (normalized)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--spurious-count", spurious_count, "Spurious truth: number of extra phases")
      ->capture_default_str();
  app.add_option("--grid-count", grid_count, "Grid truth: number of phases (1..12)")
      ->capture_default_str();
  app.add_option("--num-dists", num_dists, "Number of posterior components")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--mode", mode, "Posterior representation: fourier, normal, mixed")
      ->check(CLI::IsMember({"fourier", "normal", "mixed"}))
      ->capture_default_str();
  app.add_option("--n-max", n_max, "Fourier truncation order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--epsilon", epsilon, "Pointwise tolerance fixing the switch threshold")
      ->capture_default_str();
  app.add_option("--init-sigma", init_sigma, "Prior standard deviation")->capture_default_str();
  app.add_option("--scheme", scheme, "Exponent schedule: fixed, cyclic, adaptive, adaptive-cyclic, qft")
      ->check(CLI::IsMember({"fixed", "cyclic", "adaptive", "adaptive-cyclic", "qft"}))
      ->capture_default_str();
  app.add_option("--k-list", k_list, "Fixed scheme: per-round exponents")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--c-max", c_max, "Cyclic scheme: cycle length")->capture_default_str();
  app.add_option("--k-max", k_max, "Adaptive schemes: exponent cap")->capture_default_str();
  app.add_option("--rounds", rounds, "QFT scheme: rounds per experiment (1..8)")
      ->capture_default_str();
  app.add_option("--noise", noise, "Noise model: ideal, depolarizing, readout")
      ->check(CLI::IsMember({"ideal", "depolarizing", "readout"}))
      ->capture_default_str();
  app.add_option("--k-err", k_err, "Depolarizing noise scale")->capture_default_str();
  app.add_option("--readout-p", readout_p, "Read-out bit-flip probability")->capture_default_str();
  app.add_option("--trials", trials, "Number of independent trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--iterations", iterations, "Experiments per trial")->capture_default_str();
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--weight-schedule-T", schedule_period,
                 "Weight solver runs every iteration <= T, then at T*2^a")
      ->capture_default_str();
  app.add_flag("--single-projection", single_projection,
               "Weight solver: project once per step and backtrack along that direction");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--ref-iteration", ref_iteration,
                 "Matching iteration for aggregate errors (-1 = final)")
      ->capture_default_str();
  app.add_option("--threads", threads, "Trial parallelism (0 = all cores)")->capture_default_str();
  app.add_option("--snapshots-per-decade", snapshots_per_decade, "Trajectory sampling density")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--weight-threshold", weight_threshold, "Filter: minimum surviving weight")
      ->capture_default_str();
  app.add_option("--tv-window", tv_window, "Filter: total-variation window")
      ->capture_default_str();
  app.add_option("--tv-threshold", tv_threshold, "Filter: total-variation limit (radians)")
      ->capture_default_str();
  app.add_option("--tau-degrees", tau_degrees, "Filter: bundling radius (degrees)")
      ->capture_default_str();
  app.add_option("--success-tol", success_tol, "Success check tolerance (radians)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    bqpe::BatchConfig config;
    config.truth.mode = parse_truth(truth_mode);
    config.truth.phases = phases;
    config.truth.weights = weights;
    config.truth.spurious_count = spurious_count;
    config.truth.grid_count = grid_count;

    config.estimator.num_distributions = num_dists;
    config.estimator.mode = parse_mode(mode);
    config.estimator.n_max = n_max;
    config.estimator.epsilon = epsilon;
    config.estimator.init_sigma = init_sigma;
    config.estimator.iterations = iterations;
    config.estimator.seed = seed;
    config.estimator.weight_schedule_period = schedule_period;
    config.estimator.solver.single_projection = single_projection;
    config.estimator.snapshots_per_decade = snapshots_per_decade;

    config.estimator.scheme.kind = parse_scheme(scheme);
    config.estimator.scheme.fixed_k = k_list;
    config.estimator.scheme.c_max = c_max;
    config.estimator.scheme.k_max = k_max;
    config.estimator.scheme.qft_rounds = rounds;

    if (noise == "depolarizing") config.estimator.noise = bqpe::DepolarizingNoise{k_err};
    else if (noise == "readout") config.estimator.noise = bqpe::ReadOutNoise{readout_p};
    else config.estimator.noise = bqpe::IdealNoise{};

    config.trials = trials;
    config.threads = threads;
    config.out_dir = out_dir;
    config.ref_iteration = ref_iteration;
    config.weight_threshold = weight_threshold;
    config.tv_window = tv_window;
    config.tv_threshold = tv_threshold;
    config.tau_degrees = tau_degrees;
    config.success_tol = success_tol;

    const bqpe::BatchResult result = run_batch(config);
    int successes = 0;
    for (const auto& trial : result.trials) successes += trial.success ? 1 : 0;
    std::printf("wrote %zu trial files, %s, %s (%d/%d successes)\n",
                result.trial_csv_paths.size(), result.aggregate_csv_path.c_str(),
                result.summary_path.c_str(), successes, trials);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
