#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bqpe {

/// Append-only store of per-experiment likelihood-mass vectors
/// C^(l) = ( integral P_j(phi) L_l(phi) dphi )_j, one vector per experiment.
/// Entries must be nonnegative with at least one positive component.
class LikelihoodLedger {
 public:
  explicit LikelihoodLedger(int components);

  void append(std::span<const double> c);
  int components() const { return components_; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()) / components_; }
  std::span<const double> entry(std::int64_t i) const;

 private:
  int components_;
  std::vector<double> data_;  // row-major, stride = components_
};

/// Mixture-weight negative log likelihood
///   f(x) = -(1/n) * sum_l log <C^(l), x>
/// over the probability simplex. Throws numeric_error when an inner product is
/// nonpositive. Empty ledger evaluates to 0 with zero gradient.
double nll(const LikelihoodLedger& ledger, std::span<const double> x);
std::vector<double> nll_gradient(const LikelihoodLedger& ledger, std::span<const double> x);

/// Euclidean projection onto the probability simplex
/// { x : x_i >= 0, sum x_i = 1 } via the sorting algorithm (O(m log m)).
std::vector<double> project_simplex(std::span<const double> x);

struct SolveOptions {
  double tolerance = 1e-8;      ///< stop when || P(x - g) - x ||_2 <= tolerance
  int max_iterations = 100;
  int max_halvings = 30;
  double armijo_gamma = 1e-3;
  /// Default: curvilinear search, re-projecting x - alpha*g at every halved
  /// alpha. Alternative: project once at alpha = 1 and backtrack along the
  /// resulting feasible direction.
  bool single_projection = false;
};

/// Projected-gradient descent with Armijo backtracking, warm-started from x0
/// (x0 is projected if it is not already on the simplex).
std::vector<double> solve_weights(const LikelihoodLedger& ledger, std::span<const double> x0,
                                  const SolveOptions& options = {});

/// Exponential solve schedule: solve at every iteration <= period, afterwards
/// only when iteration == period * 2^a for integer a >= 1.
bool should_solve(std::int64_t iteration, std::int64_t period);

}  // namespace bqpe
