#pragma once

#include "bqpe/fourier_series.hpp"

namespace bqpe {

/// Wrapped normal distribution on [0, 2*pi) with location mu and scale
/// sigma > 0 of the underlying line normal.
struct WrappedNormal {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Density of the wrapped normal at phi (sum over enough wrap images for full
/// double precision).
double density(const WrappedNormal& d, double phi);

/// k-th trigonometric moment of the wrapped normal:
///   <f, cos(k.)> = cos(mu*k) * exp(-(sigma*k)^2 / 2)
///   <f, sin(k.)> = sin(mu*k) * exp(-(sigma*k)^2 / 2)
struct TrigMoment {
  double cos_part;
  double sin_part;
};
TrigMoment trig_moment(const WrappedNormal& d, int k);

/// Expectation of a Fourier series under the wrapped normal:
/// integral f(phi) * s(phi) dphi, evaluated in closed form from the
/// trigonometric moments (the k = 0 term contributes s.c0 * 1).
double normal_expectation(const WrappedNormal& d, const FourierSeries& s);

/// Normalized truncated-Fourier representation of the density, harmonics up to
/// n_max. Coefficients: c0 = 1/(2*pi), ck = cos(mu*k)*exp(-(sigma*k)^2/2)/pi,
/// sk = sin(mu*k)*exp(-(sigma*k)^2/2)/pi.
FourierSeries to_fourier(const WrappedNormal& d, int n_max);

/// Upper bound on the max pointwise error of the n_max-truncated Fourier
/// representation:  erfc(n_max*sigma/sqrt(2)) / (sigma*sqrt(2*pi)).
/// erfc comes from std::erfc (glibc libm, rational/asymptotic approximation
/// accurate to < 1 ulp, well beyond the 1e-14 relative error needed here).
double truncation_error_bound(double sigma, int n_max);

/// Smallest sigma at which the truncation bound still meets the pointwise
/// tolerance epsilon, i.e. min sigma with
///   erfc(n_max*sigma/sqrt(2)) <= epsilon * sigma * sqrt(2*pi).
/// Found by bisection on [1e-6, 10] to absolute tolerance 1e-6. Distributions
/// narrower than this cannot be represented by the truncated series to
/// tolerance epsilon and should be handed to the wrapped-normal form.
double critical_sigma(int n_max, double epsilon);

/// Result of a closed-form single-experiment posterior refit.
struct PosteriorMoment {
  double mu;        ///< posterior circular mean, in [0, 2*pi)
  double sigma;     ///< posterior Holevo deviation, >= 1e-12
  bool degenerate;  ///< set when |<e^{i phi}>| >= 1 forced the sigma floor
};

/// Moment-matched refit of the per-distribution posterior
///   Q(phi) ~ f_{mu,sigma}(phi) * (background + own_weight * L(phi)) / marginal
/// without leaving the (mu, sigma) parameterization: the complex expectation
/// <e^{i phi}>_Q is assembled from cosine- and sine-shifted copies of the
/// mixture series evaluated against the trigonometric moments. Throws
/// numeric_error when the expectation vanishes (moments undefined).
PosteriorMoment posterior_moment(const WrappedNormal& d, const FourierSeries& likelihood,
                                 double background, double own_weight, double marginal);

}  // namespace bqpe
