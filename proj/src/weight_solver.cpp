#include "bqpe/weight_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bqpe/errors.hpp"

namespace bqpe {

LikelihoodLedger::LikelihoodLedger(int components) : components_(components) {
  if (components < 1) throw std::invalid_argument("LikelihoodLedger: need >= 1 component");
}

void LikelihoodLedger::append(std::span<const double> c) {
  if (static_cast<int>(c.size()) != components_) {
    throw std::invalid_argument("LikelihoodLedger: entry length mismatch");
  }
  bool any_positive = false;
  for (double v : c) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("LikelihoodLedger: entries must be finite and nonnegative");
    }
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("LikelihoodLedger: entry must have a positive component");
  data_.insert(data_.end(), c.begin(), c.end());
}

std::span<const double> LikelihoodLedger::entry(std::int64_t i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("LikelihoodLedger: entry index out of range");
  return {data_.data() + i * components_, static_cast<std::size_t>(components_)};
}

namespace {

void check_point(const LikelihoodLedger& ledger, std::span<const double> x) {
  if (static_cast<int>(x.size()) != ledger.components()) {
    throw std::invalid_argument("weight solver: point dimension mismatch");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double nll(const LikelihoodLedger& ledger, std::span<const double> x) {
  check_point(ledger, x);
  const std::int64_t n = ledger.size();
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (std::int64_t l = 0; l < n; ++l) {
    const double p = dot(ledger.entry(l), x);
    if (!(p > 0.0)) throw numeric_error("nll: mixture probability nonpositive at evaluation point");
    acc += std::log(p);
  }
  return -acc / static_cast<double>(n);
}

std::vector<double> nll_gradient(const LikelihoodLedger& ledger, std::span<const double> x) {
  check_point(ledger, x);
  const std::int64_t n = ledger.size();
  std::vector<double> g(x.size(), 0.0);
  if (n == 0) return g;
  for (std::int64_t l = 0; l < n; ++l) {
    const auto c = ledger.entry(l);
    const double p = dot(c, x);
    if (!(p > 0.0)) throw numeric_error("nll_gradient: mixture probability nonpositive");
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= c[i] / p;
  }
  for (double& v : g) v /= static_cast<double>(n);
  return g;
}

std::vector<double> project_simplex(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("project_simplex: empty input");
  std::vector<double> u(x.begin(), x.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  // Largest prefix rho with u_rho + (1 - cumsum_rho)/rho > 0 defines the shift.
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double candidate = (1.0 - cumulative) / static_cast<double>(i + 1);
    if (u[i] + candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] + theta, 0.0);
  return out;
}

std::vector<double> solve_weights(const LikelihoodLedger& ledger, std::span<const double> x0,
                                  const SolveOptions& options) {
  check_point(ledger, x0);
  std::vector<double> x = project_simplex(x0);
  if (ledger.size() == 0) return x;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const std::vector<double> g = nll_gradient(ledger, x);
    const double fx = nll(ledger, x);

    // Full-step projected direction doubles as the stationarity measure.
    std::vector<double> trial(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - g[i];
    std::vector<double> target = project_simplex(trial);
    std::vector<double> d(x.size());
    double dnorm2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      d[i] = target[i] - x[i];
      dnorm2 += d[i] * d[i];
    }
    if (std::sqrt(dnorm2) <= options.tolerance) break;

    bool accepted = false;
    if (options.single_projection) {
      // Backtrack along the fixed feasible direction d.
      const double slope = dot(d, g);
      double t = 1.0;
      for (int h = 0; h <= options.max_halvings; ++h) {
        std::vector<double> candidate(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) candidate[i] = x[i] + t * d[i];
        if (nll(ledger, candidate) <= fx + options.armijo_gamma * t * slope) {
          x = std::move(candidate);
          accepted = true;
          break;
        }
        t *= 0.5;
      }
    } else {
      // Curvilinear search: re-project at each step size.
      double alpha = 1.0;
      for (int h = 0; h <= options.max_halvings; ++h) {
        std::vector<double> candidate;
        std::vector<double> step(x.size());
        if (h == 0) {
          candidate = target;  // alpha = 1 already projected above
        } else {
          for (std::size_t i = 0; i < x.size(); ++i) step[i] = x[i] - alpha * g[i];
          candidate = project_simplex(step);
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) slope += (candidate[i] - x[i]) * g[i];
        if (nll(ledger, candidate) <= fx + options.armijo_gamma * slope) {
          x = std::move(candidate);
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
    }
    if (!accepted) break;  // line search exhausted; x is the best available point
  }
  return x;
}

bool should_solve(std::int64_t iteration, std::int64_t period) {
  if (iteration < 1 || period < 1) throw std::invalid_argument("should_solve: inputs must be >= 1");
  if (iteration <= period) return true;
  if (iteration % period != 0) return false;
  const std::int64_t q = iteration / period;
  return (q & (q - 1)) == 0;
}

}  // namespace bqpe
