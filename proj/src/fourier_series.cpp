#include "bqpe/fourier_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bqpe/angles.hpp"
#include "bqpe/errors.hpp"

namespace bqpe {

FourierSeries::FourierSeries(int max_index) {
  if (max_index < 0) throw std::invalid_argument("FourierSeries: max_index must be >= 0");
  cos_.assign(static_cast<std::size_t>(max_index) + 1, 0.0);
  sin_.assign(static_cast<std::size_t>(max_index) + 1, 0.0);
}

FourierSeries FourierSeries::constant(double value) {
  FourierSeries out(0);
  out.cos_[0] = value;
  return out;
}

FourierSeries FourierSeries::uniform() { return constant(1.0 / kTwoPi); }

double FourierSeries::cos_coeff(int k) const {
  if (k < 0) throw std::invalid_argument("FourierSeries: negative harmonic index");
  return k > max_index() ? 0.0 : cos_[static_cast<std::size_t>(k)];
}

double FourierSeries::sin_coeff(int k) const {
  if (k < 0) throw std::invalid_argument("FourierSeries: negative harmonic index");
  return k > max_index() ? 0.0 : sin_[static_cast<std::size_t>(k)];
}

void FourierSeries::set_cos(int k, double value) {
  if (k < 0 || k > max_index()) throw std::invalid_argument("FourierSeries: index out of range");
  cos_[static_cast<std::size_t>(k)] = value;
}

void FourierSeries::set_sin(int k, double value) {
  if (k < 1 || k > max_index()) throw std::invalid_argument("FourierSeries: sin index out of range");
  sin_[static_cast<std::size_t>(k)] = value;
}

void FourierSeries::add_cos(int k, double value) {
  if (k < 0 || k > max_index()) throw std::invalid_argument("FourierSeries: index out of range");
  cos_[static_cast<std::size_t>(k)] += value;
}

void FourierSeries::add_sin(int k, double value) {
  if (k < 1 || k > max_index()) throw std::invalid_argument("FourierSeries: sin index out of range");
  sin_[static_cast<std::size_t>(k)] += value;
}

double FourierSeries::evaluate(double phi) const {
  double acc = cos_[0];
  for (int k = 1; k <= max_index(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    acc += cos_[i] * std::cos(k * phi) + sin_[i] * std::sin(k * phi);
  }
  return acc;
}

FourierSeries multiply(const FourierSeries& a, const FourierSeries& b) {
  const int na = a.max_index();
  const int nb = b.max_index();
  FourierSeries out(na + nb);
  for (int j = 0; j <= na; ++j) {
    const double aj = a.cos_coeff(j);
    const double bj = a.sin_coeff(j);
    if (aj == 0.0 && bj == 0.0) continue;
    for (int k = 0; k <= nb; ++k) {
      const double ck = b.cos_coeff(k);
      const double dk = b.sin_coeff(k);
      if (ck == 0.0 && dk == 0.0) continue;
      const int p = j + k;
      const int q = std::abs(j - k);
      // cos(j)cos(k) = (cos(j-k) + cos(j+k)) / 2
      const double cc = 0.5 * aj * ck;
      out.add_cos(q, cc);
      out.add_cos(p, cc);
      // sin(j)sin(k) = (cos(j-k) - cos(j+k)) / 2
      const double ss = 0.5 * bj * dk;
      out.add_cos(q, ss);
      out.add_cos(p, -ss);
      // sin(j)cos(k) = (sin(j+k) + sin(j-k)) / 2, with sin(-m) = -sin(m)
      const double sc = 0.5 * bj * ck;
      if (p > 0) out.add_sin(p, sc);
      if (j > k) out.add_sin(q, sc);
      else if (k > j) out.add_sin(q, -sc);
      // cos(j)sin(k) = (sin(j+k) - sin(j-k)) / 2
      const double cs = 0.5 * aj * dk;
      if (p > 0) out.add_sin(p, cs);
      if (k > j) out.add_sin(q, cs);
      else if (j > k) out.add_sin(q, -cs);
    }
  }
  return out;
}

FourierSeries multiply_single_round(const FourierSeries& s, int k, double gamma) {
  if (k < 1) throw std::invalid_argument("multiply_single_round: k must be >= 1");
  const int n = s.max_index();
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  FourierSeries out(n + k);
  for (int j = 0; j <= n; ++j) {
    const double cj = s.cos_coeff(j);
    const double sj = s.sin_coeff(j);
    if (cj == 0.0 && sj == 0.0) continue;
    const int sum = k + j;
    const int diff = std::abs(k - j);
    if (cj != 0.0) {
      out.add_cos(j, 0.5 * cj);
      out.add_cos(sum, 0.25 * cj * cg);
      out.add_cos(diff, 0.25 * cj * cg);
      out.add_sin(sum, -0.25 * cj * sg);
      if (k > j) out.add_sin(diff, -0.25 * cj * sg);
      else if (j > k) out.add_sin(diff, 0.25 * cj * sg);
    }
    if (sj != 0.0) {
      out.add_sin(j, 0.5 * sj);
      out.add_sin(sum, 0.25 * sj * cg);
      if (k > j) out.add_sin(diff, -0.25 * sj * cg);
      else if (j > k) out.add_sin(diff, 0.25 * sj * cg);
      out.add_cos(sum, 0.25 * sj * sg);
      out.add_cos(diff, -0.25 * sj * sg);
    }
  }
  return out;
}

FourierSeries add_scaled(const FourierSeries& a, double alpha, const FourierSeries& b, double beta) {
  const int n = std::max(a.max_index(), b.max_index());
  FourierSeries out(n);
  for (int kk = 0; kk <= n; ++kk) {
    out.set_cos(kk, alpha * a.cos_coeff(kk) + beta * b.cos_coeff(kk));
    if (kk >= 1) out.set_sin(kk, alpha * a.sin_coeff(kk) + beta * b.sin_coeff(kk));
  }
  return out;
}

FourierSeries truncate(const FourierSeries& s, int n_max) {
  if (n_max < 0) throw std::invalid_argument("truncate: n_max must be >= 0");
  const int n = std::min(n_max, s.max_index());
  FourierSeries out(n);
  for (int k = 0; k <= n; ++k) {
    out.set_cos(k, s.cos_coeff(k));
    if (k >= 1) out.set_sin(k, s.sin_coeff(k));
  }
  return out;
}

double inner_product(const FourierSeries& a, const FourierSeries& b) {
  const int n = std::min(a.max_index(), b.max_index());
  double acc = kTwoPi * a.cos_coeff(0) * b.cos_coeff(0);
  for (int k = 1; k <= n; ++k) {
    acc += kPi * (a.cos_coeff(k) * b.cos_coeff(k) + a.sin_coeff(k) * b.sin_coeff(k));
  }
  return acc;
}

FourierSeries normalize(const FourierSeries& s) {
  const double c0 = s.cos_coeff(0);
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw numeric_error("normalize: series integral is nonpositive or non-finite");
  }
  const double scale = 1.0 / (kTwoPi * c0);
  FourierSeries out(s.max_index());
  for (int k = 0; k <= s.max_index(); ++k) {
    out.set_cos(k, scale * s.cos_coeff(k));
    if (k >= 1) out.set_sin(k, scale * s.sin_coeff(k));
  }
  out.set_cos(0, 1.0 / kTwoPi);  // exact, avoids multiplicative drift across updates
  return out;
}

CircularMoments moments(const FourierSeries& s) {
  CircularMoments out;
  if (!try_moments(s, out)) {
    throw numeric_error("moments: first harmonic vanishes, circular moments undefined");
  }
  return out;
}

bool try_moments(const FourierSeries& s, CircularMoments& out) {
  const double c1 = s.cos_coeff(1);
  const double s1 = s.sin_coeff(1);
  const double r2 = c1 * c1 + s1 * s1;
  if (r2 == 0.0) return false;
  out.mean = wrap_angle(std::atan2(s1, c1));
  out.holevo_variance = 1.0 / (kPi * kPi * r2) - 1.0;
  return true;
}

}  // namespace bqpe
