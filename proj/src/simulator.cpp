#include "bqpe/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "bqpe/angles.hpp"

namespace bqpe {

GroundTruth::GroundTruth(std::vector<double> phases_in, std::vector<double> weights_in)
    : phases(std::move(phases_in)), weights(std::move(weights_in)) {
  if (phases.empty() || phases.size() != weights.size()) {
    throw std::invalid_argument("GroundTruth: phases and weights must be nonempty, equal length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("GroundTruth: weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("GroundTruth: weights must sum to 1 within 1e-12");
  }
  for (double& p : phases) p = wrap_angle(p);
}

DesignSchedule::DesignSchedule(const SchemeSpec& spec) : spec_(spec) {
  switch (spec_.kind) {
    case SchemeSpec::Kind::Fixed:
      if (spec_.fixed_k.empty()) throw std::invalid_argument("SchemeSpec: fixed_k must be nonempty");
      for (int k : spec_.fixed_k) {
        if (k < 1) throw std::invalid_argument("SchemeSpec: exponents must be >= 1");
      }
      break;
    case SchemeSpec::Kind::Cyclic:
      if (spec_.c_max < 1) throw std::invalid_argument("SchemeSpec: c_max must be >= 1");
      break;
    case SchemeSpec::Kind::Adaptive:
    case SchemeSpec::Kind::AdaptiveCyclic:
      if (spec_.k_max < 1) throw std::invalid_argument("SchemeSpec: k_max must be >= 1");
      break;
    case SchemeSpec::Kind::Qft:
      if (spec_.qft_rounds < 1 || spec_.qft_rounds > 8) {
        throw std::invalid_argument("SchemeSpec: qft_rounds must be 1..8");
      }
      break;
  }
}

int DesignSchedule::adaptive_exponent(std::span<const ComponentSummary> posterior, int k_max) {
  if (posterior.empty()) throw std::invalid_argument("adaptive_exponent: posterior summary empty");
  double sum = 0.0;
  for (const auto& c : posterior) {
    if (c.weight <= 0.0) continue;  // dead components carry no resolution demand
    if (!(c.sigma > 0.0)) return k_max;
    sum += 1.25 * c.weight / c.sigma;
  }
  if (!std::isfinite(sum) || sum >= static_cast<double>(k_max)) return k_max;
  const double k = std::ceil(sum);
  return k < 1.0 ? 1 : static_cast<int>(k);
}

ExperimentDesign DesignSchedule::next(std::span<const ComponentSummary> posterior,
                                      Xoshiro256StarStar& rng) {
  switch (spec_.kind) {
    case SchemeSpec::Kind::Fixed: {
      std::vector<double> beta(spec_.fixed_k.size());
      for (double& b : beta) b = rng.uniform(0.0, kTwoPi);
      return ExperimentDesign::standard(spec_.fixed_k, std::move(beta));
    }
    case SchemeSpec::Kind::Cyclic: {
      const int k = cycle_pos_ + 1;
      cycle_pos_ = (cycle_pos_ + 1) % spec_.c_max;
      return ExperimentDesign::standard({k}, {rng.uniform(0.0, kTwoPi)});
    }
    case SchemeSpec::Kind::Adaptive: {
      const int k = adaptive_exponent(posterior, spec_.k_max);
      return ExperimentDesign::standard({k}, {rng.uniform(0.0, kTwoPi)});
    }
    case SchemeSpec::Kind::AdaptiveCyclic: {
      if (cycle_pos_ == 0) cycle_len_ = adaptive_exponent(posterior, spec_.k_max);
      const int k = cycle_pos_ + 1;
      cycle_pos_ = (cycle_pos_ + 1) % cycle_len_;
      return ExperimentDesign::standard({k}, {rng.uniform(0.0, kTwoPi)});
    }
    case SchemeSpec::Kind::Qft:
      return ExperimentDesign::qft(spec_.qft_rounds);
  }
  throw std::logic_error("DesignSchedule: unknown scheme kind");
}

namespace {

int total_k(const ExperimentDesign& design) {
  int total = 0;
  for (int k : design.k) total += k;
  return total;
}

MeasurementRecord sample_standard(const ExperimentDesign& design, double phi,
                                  Xoshiro256StarStar& rng) {
  MeasurementRecord m(design.k.size());
  for (int r = 0; r < design.rounds(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    const double c = std::cos(0.5 * design.k[i] * phi + 0.5 * design.beta[i]);
    m[i] = rng.bernoulli(c * c) ? 0 : 1;
  }
  return m;
}

MeasurementRecord sample_qft(const ExperimentDesign& design, double phi, Xoshiro256StarStar& rng) {
  MeasurementRecord m(design.k.size());
  double beta = 0.0;
  for (int r = 0; r < design.rounds(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    const double c = std::cos(0.5 * design.k[i] * phi + 0.5 * beta);
    const int bit = rng.bernoulli(c * c) ? 0 : 1;
    m[i] = bit;
    beta = 0.5 * beta - 0.5 * kPi * bit;
  }
  return m;
}

}  // namespace

MeasurementRecord simulate_experiment(const ExperimentDesign& design, const GroundTruth& truth,
                                      const NoiseModel& noise, Xoshiro256StarStar& rng) {
  if (design.k.empty()) throw std::invalid_argument("simulate_experiment: empty design");
  const std::size_t j = rng.categorical(truth.weights);
  const double phi = truth.phases[j];

  if (design.mode == ExperimentDesign::Mode::Qft) {
    MeasurementRecord m = sample_qft(design, phi, rng);
    if (std::holds_alternative<DepolarizingNoise>(noise)) {
      throw std::invalid_argument("simulate_experiment: Qft mode supports Ideal/ReadOut noise only");
    }
    if (const auto* ro = std::get_if<ReadOutNoise>(&noise)) {
      for (int& bit : m) {
        if (rng.bernoulli(ro->p)) bit ^= 1;
      }
    }
    return m;
  }

  MeasurementRecord m = sample_standard(design, phi, rng);
  if (const auto* dep = std::get_if<DepolarizingNoise>(&noise)) {
    const double keep = std::exp(-static_cast<double>(total_k(design)) / dep->k_err);
    if (rng.bernoulli(1.0 - keep)) {
      for (int& bit : m) bit = rng.bernoulli(0.5) ? 1 : 0;
    }
  } else if (const auto* ro = std::get_if<ReadOutNoise>(&noise)) {
    for (int& bit : m) {
      if (rng.bernoulli(ro->p)) bit ^= 1;
    }
  }
  return m;
}

}  // namespace bqpe
