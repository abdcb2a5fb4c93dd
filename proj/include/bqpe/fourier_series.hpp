#pragma once

#include <vector>

namespace bqpe {

/// Circular mean and Holevo variance extracted from the first harmonic of a
/// density on [0, 2*pi).
struct CircularMoments {
  double mean;             ///< in [0, 2*pi)
  double holevo_variance;  ///< |<e^{i phi}>|^{-2} - 1; may be negative for a
                           ///< ringing truncated series whose first-harmonic
                           ///< magnitude exceeds that of any true density
};

/// Real truncated Fourier series on [0, 2*pi):
///
///   g(phi) = c[0] + sum_{k=1..n} ( c[k]*cos(k*phi) + s[k]*sin(k*phi) )
///
/// Coefficients are stored densely for k = 0..n with s[0] fixed at zero.
/// A normalized probability density satisfies 2*pi*c[0] == 1.
class FourierSeries {
 public:
  /// Zero series of the given maximum harmonic index (all coefficients 0).
  explicit FourierSeries(int max_index = 0);

  /// Constant series {c0 = value}.
  static FourierSeries constant(double value);

  /// Uniform density on [0, 2*pi): {c0 = 1/(2*pi)}.
  static FourierSeries uniform();

  int max_index() const { return static_cast<int>(cos_.size()) - 1; }

  /// Coefficient access; indices beyond max_index read as zero.
  double cos_coeff(int k) const;
  double sin_coeff(int k) const;

  void set_cos(int k, double value);
  void set_sin(int k, double value);  // rejects k == 0
  void add_cos(int k, double value);
  void add_sin(int k, double value);

  /// Direct evaluation at phi (no periodic reduction needed; each harmonic is
  /// 2*pi periodic by construction).
  double evaluate(double phi) const;

 private:
  std::vector<double> cos_;  // c[0..n]
  std::vector<double> sin_;  // s[0..n], s[0] == 0
};

/// Full product via the cosine/sine product-to-sum identities. The result has
/// max index a.max_index() + b.max_index().
FourierSeries multiply(const FourierSeries& a, const FourierSeries& b);

/// Product with one measurement-round factor (1 + cos(k*phi + gamma))/2 using
/// the closed-form coefficient shifts: each input harmonic j contributes half
/// of itself plus quarter-weight images at |k - j| and k + j rotated by gamma.
/// Equivalent to multiply() against {c0=1/2, c_k=cos(gamma)/2, s_k=-sin(gamma)/2}
/// but without forming that series. Requires k >= 1.
FourierSeries multiply_single_round(const FourierSeries& s, int k, double gamma);

/// alpha*a + beta*b, coefficient-wise.
FourierSeries add_scaled(const FourierSeries& a, double alpha, const FourierSeries& b, double beta);

/// Drop all harmonics above n_max (n_max >= 0).
FourierSeries truncate(const FourierSeries& s, int n_max);

/// L2 inner product on [0, 2*pi):
/// <a,b> = 2*pi*a0*b0 + pi * sum_k (a_ck*b_ck + a_sk*b_sk).
double inner_product(const FourierSeries& a, const FourierSeries& b);

/// Rescale so the integral over [0, 2*pi) equals 1 (c0 becomes 1/(2*pi)).
/// Throws numeric_error if c0 <= 0 or non-finite.
FourierSeries normalize(const FourierSeries& s);

/// First-harmonic circular moments. Throws numeric_error when c1 == s1 == 0
/// (moments undefined).
CircularMoments moments(const FourierSeries& s);

/// Non-throwing variant: returns false when the first harmonic vanishes.
bool try_moments(const FourierSeries& s, CircularMoments& out);

}  // namespace bqpe
