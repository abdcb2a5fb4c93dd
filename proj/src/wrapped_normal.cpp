#include "bqpe/wrapped_normal.hpp"

#include <cmath>
#include <stdexcept>

#include "bqpe/angles.hpp"
#include "bqpe/errors.hpp"

namespace bqpe {

namespace {

void check_params(const WrappedNormal& d) {
  if (!(d.sigma > 0.0) || !std::isfinite(d.sigma) || !std::isfinite(d.mu)) {
    throw std::invalid_argument("WrappedNormal: sigma must be positive and parameters finite");
  }
}

}  // namespace

double density(const WrappedNormal& d, double phi) {
  check_params(d);
  const double x = wrap_angle(phi);
  const double mu = wrap_angle(d.mu);
  // Images beyond ~10 sigma contribute below double precision.
  const int span = 1 + static_cast<int>(std::ceil(10.0 * d.sigma / kTwoPi));
  double acc = 0.0;
  for (int w = -span; w <= span; ++w) {
    const double t = (x - mu + kTwoPi * w) / d.sigma;
    acc += std::exp(-0.5 * t * t);
  }
  return acc / (d.sigma * std::sqrt(kTwoPi));
}

TrigMoment trig_moment(const WrappedNormal& d, int k) {
  check_params(d);
  if (k < 0) throw std::invalid_argument("trig_moment: k must be >= 0");
  const double damp = std::exp(-0.5 * (d.sigma * k) * (d.sigma * k));
  return {std::cos(d.mu * k) * damp, std::sin(d.mu * k) * damp};
}

double normal_expectation(const WrappedNormal& d, const FourierSeries& s) {
  check_params(d);
  double acc = s.cos_coeff(0);  // <f, cos(0 . )> = 1, <f, sin(0 . )> = 0
  for (int k = 1; k <= s.max_index(); ++k) {
    const TrigMoment m = trig_moment(d, k);
    acc += s.cos_coeff(k) * m.cos_part + s.sin_coeff(k) * m.sin_part;
  }
  return acc;
}

FourierSeries to_fourier(const WrappedNormal& d, int n_max) {
  check_params(d);
  if (n_max < 0) throw std::invalid_argument("to_fourier: n_max must be >= 0");
  FourierSeries out(n_max);
  out.set_cos(0, 1.0 / kTwoPi);
  for (int k = 1; k <= n_max; ++k) {
    const TrigMoment m = trig_moment(d, k);
    out.set_cos(k, m.cos_part / kPi);
    out.set_sin(k, m.sin_part / kPi);
  }
  return out;
}

double truncation_error_bound(double sigma, int n_max) {
  if (!(sigma > 0.0)) throw std::invalid_argument("truncation_error_bound: sigma must be > 0");
  if (n_max < 0) throw std::invalid_argument("truncation_error_bound: n_max must be >= 0");
  return std::erfc(n_max * sigma / std::sqrt(2.0)) / (sigma * std::sqrt(kTwoPi));
}

double critical_sigma(int n_max, double epsilon) {
  if (n_max < 1) throw std::invalid_argument("critical_sigma: n_max must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("critical_sigma: epsilon must be > 0");
  const auto margin = [&](double sigma) {
    // <= 0 once the truncation bound meets the epsilon tolerance
    return std::erfc(n_max * sigma / std::sqrt(2.0)) - epsilon * sigma * std::sqrt(kTwoPi);
  };
  double lo = 1e-6;
  double hi = 10.0;
  if (margin(lo) <= 0.0) return lo;
  if (margin(hi) > 0.0) {
    throw std::invalid_argument("critical_sigma: tolerance unreachable within sigma <= 10");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) <= 0.0) hi = mid;
    else lo = mid;
  }
  return hi;  // hi always satisfies the inequality
}

PosteriorMoment posterior_moment(const WrappedNormal& d, const FourierSeries& likelihood,
                                 double background, double own_weight, double marginal) {
  check_params(d);
  if (!(marginal > 0.0) || !std::isfinite(marginal)) {
    throw numeric_error("posterior_moment: marginal must be positive and finite");
  }
  // Mixture factor multiplying the prior density.
  FourierSeries mix = add_scaled(FourierSeries::constant(background), 1.0, likelihood, own_weight);

  FourierSeries unit_cos(1);
  unit_cos.set_cos(1, 1.0);
  FourierSeries unit_sin(1);
  unit_sin.set_sin(1, 1.0);

  const double re = normal_expectation(d, multiply(mix, unit_cos)) / marginal;
  const double im = normal_expectation(d, multiply(mix, unit_sin)) / marginal;
  const double r = std::hypot(re, im);
  if (r == 0.0 || !std::isfinite(r)) {
    throw numeric_error("posterior_moment: posterior phase expectation undefined");
  }

  PosteriorMoment out;
  out.mu = wrap_angle(std::atan2(im, re));
  if (r >= 1.0) {
    // A true density satisfies r < 1; numeric excess means the posterior is
    // concentrated beyond resolution. Floor the scale and report it.
    out.sigma = 1e-12;
    out.degenerate = true;
  } else {
    out.sigma = std::sqrt(1.0 / (r * r) - 1.0);
    if (out.sigma < 1e-12) out.sigma = 1e-12;
    out.degenerate = false;
  }
  return out;
}

}  // namespace bqpe
