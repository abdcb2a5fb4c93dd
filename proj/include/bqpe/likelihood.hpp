#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "bqpe/fourier_series.hpp"

namespace bqpe {

/// Bits observed in one multi-round experiment, one entry per round, 0 or 1.
using MeasurementRecord = std::vector<int>;

/// One multi-round phase estimation circuit: round r applies the unitary
/// k[r] times and reads out with phase shift beta[r]. In Qft mode the k are
/// the descending powers of two and the beta come from the semiclassical
/// feedback of earlier bits, so the stored beta are ignored.
struct ExperimentDesign {
  enum class Mode { Standard, Qft };
  std::vector<int> k;
  std::vector<double> beta;
  Mode mode = Mode::Standard;

  int rounds() const { return static_cast<int>(k.size()); }

  static ExperimentDesign standard(std::vector<int> k, std::vector<double> beta);
  /// k = [2^(R-1), ..., 2, 1].
  static ExperimentDesign qft(int rounds);
};

/// Noise models applied to a whole measurement record.
struct IdealNoise {};
struct DepolarizingNoise {
  /// Record survives with probability exp(-total_k / k_err); otherwise it is
  /// replaced by uniform bits.
  double k_err;
};
struct ReadOutNoise {
  /// Each bit flips independently with probability p.
  double p;
};
using NoiseModel = std::variant<IdealNoise, DepolarizingNoise, ReadOutNoise>;

/// Born probability of observing record m in a Standard-mode design:
///   P(m | phi) = prod_r cos^2( k_r*phi/2 + (beta_r - m_r*pi)/2 ).
double prob_given_phase(const ExperimentDesign& design, const MeasurementRecord& m, double phi);

/// Noiseless likelihood of a Standard-mode record as a Fourier series in phi
/// (max harmonic = sum of the k_r).
FourierSeries ideal_likelihood(const ExperimentDesign& design, const MeasurementRecord& m);

/// Depolarizing channel on a likelihood series:
///   L'(phi) = p * L(phi) + (1 - p) * 2^{-R},  p = exp(-total_k / k_err).
FourierSeries apply_depolarizing(const FourierSeries& series, const ExperimentDesign& design,
                                 double k_err);

/// Read-out channel: sums ideal likelihoods over all 2^R true records weighted
/// by the bit-flip probabilities (1-p)^(R-d) * p^d, d = Hamming distance to m.
/// Capped at R <= 12 rounds.
FourierSeries apply_readout(const ExperimentDesign& design, const MeasurementRecord& m, double p);

/// Likelihood of record m for any Standard-mode design and noise model.
FourierSeries likelihood_series(const ExperimentDesign& design, const MeasurementRecord& m,
                                const NoiseModel& noise);

/// Likelihood of a semiclassical-QFT record of R rounds with read-out flip
/// probability p. Round r uses k_r = 2^(R-r) and the feedback phase
///   beta_1 = 0,  beta_{r+1} = beta_r / 2 - (pi/2) * b_r
/// computed from the true bits b, so the series enumerates all 2^R true
/// records. Capped at R <= 8.
FourierSeries qft_likelihood(int rounds, const MeasurementRecord& m, double p);

}  // namespace bqpe
