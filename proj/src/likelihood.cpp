#include "bqpe/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "bqpe/angles.hpp"

namespace bqpe {

namespace {

void check_standard(const ExperimentDesign& design, const MeasurementRecord& m) {
  if (design.mode != ExperimentDesign::Mode::Standard) {
    throw std::invalid_argument("likelihood: design must be Standard mode");
  }
  if (design.k.size() != design.beta.size()) {
    throw std::invalid_argument("likelihood: k and beta lengths differ");
  }
  if (design.k.empty()) throw std::invalid_argument("likelihood: design needs >= 1 round");
  if (m.size() != design.k.size()) {
    throw std::invalid_argument("likelihood: record length does not match rounds");
  }
  for (int k : design.k) {
    if (k < 1) throw std::invalid_argument("likelihood: round exponents must be >= 1");
  }
  for (int bit : m) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("likelihood: record bits must be 0/1");
  }
}

void check_bits(const MeasurementRecord& m) {
  for (int bit : m) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("likelihood: record bits must be 0/1");
  }
}

int total_k(const ExperimentDesign& design) {
  int total = 0;
  for (int k : design.k) total += k;
  return total;
}

int hamming(const MeasurementRecord& a, std::uint32_t mask_b, int rounds) {
  int d = 0;
  for (int r = 0; r < rounds; ++r) d += a[static_cast<std::size_t>(r)] ^ ((mask_b >> r) & 1u);
  return d;
}

}  // namespace

ExperimentDesign ExperimentDesign::standard(std::vector<int> k, std::vector<double> beta) {
  ExperimentDesign d;
  d.k = std::move(k);
  d.beta = std::move(beta);
  d.mode = Mode::Standard;
  if (d.k.size() != d.beta.size() || d.k.empty()) {
    throw std::invalid_argument("ExperimentDesign: k and beta must be nonempty and equal length");
  }
  for (int kk : d.k) {
    if (kk < 1) throw std::invalid_argument("ExperimentDesign: round exponents must be >= 1");
  }
  return d;
}

ExperimentDesign ExperimentDesign::qft(int rounds) {
  if (rounds < 1 || rounds > 8) throw std::invalid_argument("ExperimentDesign: Qft rounds must be 1..8");
  ExperimentDesign d;
  d.mode = Mode::Qft;
  d.k.resize(static_cast<std::size_t>(rounds));
  d.beta.assign(static_cast<std::size_t>(rounds), 0.0);
  for (int r = 0; r < rounds; ++r) d.k[static_cast<std::size_t>(r)] = 1 << (rounds - 1 - r);
  return d;
}

double prob_given_phase(const ExperimentDesign& design, const MeasurementRecord& m, double phi) {
  check_standard(design, m);
  double p = 1.0;
  for (int r = 0; r < design.rounds(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    const double c = std::cos(0.5 * design.k[i] * phi + 0.5 * (design.beta[i] - m[i] * kPi));
    p *= c * c;
  }
  return p;
}

FourierSeries ideal_likelihood(const ExperimentDesign& design, const MeasurementRecord& m) {
  check_standard(design, m);
  FourierSeries series = FourierSeries::constant(1.0);
  for (int r = 0; r < design.rounds(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    series = multiply_single_round(series, design.k[i], design.beta[i] - m[i] * kPi);
  }
  return series;
}

FourierSeries apply_depolarizing(const FourierSeries& series, const ExperimentDesign& design,
                                 double k_err) {
  if (!(k_err > 0.0)) throw std::invalid_argument("apply_depolarizing: k_err must be > 0");
  const double keep = std::exp(-static_cast<double>(total_k(design)) / k_err);
  const double floor = (1.0 - keep) * std::ldexp(1.0, -design.rounds());
  return add_scaled(series, keep, FourierSeries::constant(floor), 1.0);
}

FourierSeries apply_readout(const ExperimentDesign& design, const MeasurementRecord& m, double p) {
  check_standard(design, m);
  // Beyond p = 1/2 relabeling the outcomes makes the channel ill-posed.
  if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("apply_readout: p must be in [0, 0.5]");
  const int rounds = design.rounds();
  if (rounds > 12) throw std::invalid_argument("apply_readout: record enumeration capped at 12 rounds");

  FourierSeries out(total_k(design));
  MeasurementRecord truth(static_cast<std::size_t>(rounds));
  for (std::uint32_t mask = 0; mask < (1u << rounds); ++mask) {
    const int d = hamming(m, mask, rounds);
    const double weight = std::pow(1.0 - p, rounds - d) * std::pow(p, d);
    if (weight == 0.0) continue;
    for (int r = 0; r < rounds; ++r) truth[static_cast<std::size_t>(r)] = (mask >> r) & 1;
    out = add_scaled(out, 1.0, ideal_likelihood(design, truth), weight);
  }
  return out;
}

FourierSeries likelihood_series(const ExperimentDesign& design, const MeasurementRecord& m,
                                const NoiseModel& noise) {
  if (std::holds_alternative<ReadOutNoise>(noise)) {
    return apply_readout(design, m, std::get<ReadOutNoise>(noise).p);
  }
  FourierSeries series = ideal_likelihood(design, m);
  if (std::holds_alternative<DepolarizingNoise>(noise)) {
    series = apply_depolarizing(series, design, std::get<DepolarizingNoise>(noise).k_err);
  }
  return series;
}

FourierSeries qft_likelihood(int rounds, const MeasurementRecord& m, double p) {
  if (rounds < 1 || rounds > 8) throw std::invalid_argument("qft_likelihood: rounds must be 1..8");
  if (static_cast<int>(m.size()) != rounds) {
    throw std::invalid_argument("qft_likelihood: record length does not match rounds");
  }
  check_bits(m);
  if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("qft_likelihood: p must be in [0, 0.5]");

  const ExperimentDesign base = ExperimentDesign::qft(rounds);
  FourierSeries out(total_k(base));
  for (std::uint32_t mask = 0; mask < (1u << rounds); ++mask) {
    const int d = hamming(m, mask, rounds);
    const double weight = std::pow(1.0 - p, rounds - d) * std::pow(p, d);
    if (weight == 0.0) continue;
    // Feedback phases follow the true bits of this branch.
    FourierSeries branch = FourierSeries::constant(1.0);
    double beta = 0.0;
    for (int r = 0; r < rounds; ++r) {
      const int bit = (mask >> r) & 1;
      branch = multiply_single_round(branch, base.k[static_cast<std::size_t>(r)], beta - bit * kPi);
      beta = 0.5 * beta - 0.5 * kPi * bit;
    }
    out = add_scaled(out, 1.0, branch, weight);
  }
  return out;
}

}  // namespace bqpe
