#include <cmath>
#include <vector>

#include "bqpe/angles.hpp"
#include "bqpe/errors.hpp"
#include "bqpe/likelihood.hpp"
#include "bqpe/rng.hpp"
#include "bqpe/wrapped_normal.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bqpe;

namespace {

// Line-normal density; integrating g(x)*h(x) over (-inf, inf) equals
// integrating wrapped(g)*h over one period for any 2*pi-periodic h, which is
// what every quadrature check below relies on.
double line_normal(double mu, double sigma, double x) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(kTwoPi));
}

// Exact truncation tail sum_{k > n_max} e^{-(sigma k)^2/2} / pi, summed until
// the terms underflow.
double exact_tail(double sigma, int n_max) {
    double tail = 0.0;
    for (int k = n_max + 1; k < n_max + 2000000; ++k) {
        const double term = std::exp(-0.5 * sigma * sigma * static_cast<double>(k) * k);
        tail += term;
        if (term < tail * 1e-18 + 1e-320) break;
    }
    return tail / kPi;
}

}  // namespace

TEST_SUITE("wrapped-normal") {

TEST_CASE("density integrates to one and wraps periodically") {
    for (double sigma : {0.05, 0.3, 1.0, 4.0}) {
        const WrappedNormal d{2.5, sigma};
        const double mass =
            oracle::simpson([&](double phi) { return density(d, phi); }, 0.0, kTwoPi, 20000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(density(d, 0.4) == doctest::Approx(density(d, 0.4 + kTwoPi)).epsilon(1e-12));
        CHECK(density(d, 0.4) == doctest::Approx(density(d, 0.4 - kTwoPi)).epsilon(1e-12));
    }
}

TEST_CASE("trig_moment matches line-integral quadrature") {
    for (double sigma : {0.01, 0.1, 1.0, 3.0}) {
        for (int k : {1, 5, 50}) {
            const double mu = 2.0;
            const WrappedNormal d{mu, sigma};
            const TrigMoment tm = trig_moment(d, k);
            const double span = 12.0 * sigma;
            // enough points to resolve cos(k x) across the integration window
            const int n = std::max(4000, static_cast<int>(200.0 * k * span));
            const double c = oracle::simpson(
                [&](double x) { return line_normal(mu, sigma, x) * std::cos(k * x); }, mu - span,
                mu + span, n);
            const double s = oracle::simpson(
                [&](double x) { return line_normal(mu, sigma, x) * std::sin(k * x); }, mu - span,
                mu + span, n);
            CHECK(tm.cos_part == doctest::Approx(c).epsilon(1e-8).scale(1.0));
            CHECK(tm.sin_part == doctest::Approx(s).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("to_fourier reproduces the density within the truncation bound") {
    const WrappedNormal d{1.3, 0.5};
    const int n_max = 40;
    const FourierSeries s = to_fourier(d, n_max);
    CHECK(s.cos_coeff(0) == 1.0 / kTwoPi);
    CHECK(s.cos_coeff(1) ==
          doctest::Approx(std::cos(1.3) * std::exp(-0.125) / kPi).epsilon(1e-15));
    CHECK(s.sin_coeff(1) ==
          doctest::Approx(std::sin(1.3) * std::exp(-0.125) / kPi).epsilon(1e-15));
    // at sigma = 0.5, n_max = 40 the bound is astronomically small, so the
    // series and the density agree to full double precision
    for (double phi = 0.0; phi < kTwoPi; phi += 0.1) {
        CHECK(s.evaluate(phi) == doctest::Approx(density(d, phi)).epsilon(1e-12));
    }
}

TEST_CASE("to_fourier max pointwise error respects the bound for a narrow density") {
    const WrappedNormal d{3.0, 0.1};
    const int n_max = 20;
    const FourierSeries s = to_fourier(d, n_max);
    double max_err = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double phi = kTwoPi * i / 20000.0;
        max_err = std::max(max_err, std::abs(s.evaluate(phi) - density(d, phi)));
    }
    const double bound = truncation_error_bound(0.1, 20);
    CHECK(max_err <= bound);
    CHECK(max_err >= 0.5 * bound);  // the bound is tight for narrow densities
}

TEST_CASE("truncation_error_bound frozen value") {
    // erfc(20 * 0.1 / sqrt(2)) / (0.1 * sqrt(2*pi)), evaluated independently
    CHECK(truncation_error_bound(0.1, 20) == doctest::Approx(0.181519790377).epsilon(1e-9));
    CHECK_THROWS_AS(truncation_error_bound(0.0, 20), std::invalid_argument);
    CHECK_THROWS_AS(truncation_error_bound(-0.1, 20), std::invalid_argument);
}

TEST_CASE("truncation_error_bound dominates the exact coefficient tail") {
    for (double sigma : {0.01, 0.05, 0.1, 0.5}) {
        for (int n_max : {20, 50, 100, 200}) {
            const double bound = truncation_error_bound(sigma, n_max);
            const double tail = exact_tail(sigma, n_max);
            CHECK(bound >= tail);
        }
    }
}

TEST_CASE("truncation_error_bound is tight where the tail is dominated by its first term") {
    // tightness regime: sigma^2 * n_max small enough that the Gaussian tail
    // integral tracks the discrete sum closely
    const std::pair<double, int> cases[] = {{0.01, 20}, {0.01, 50}, {0.01, 100}, {0.01, 200},
                                            {0.05, 20}, {0.05, 50}, {0.023, 200}};
    for (const auto& [sigma, n_max] : cases) {
        const double bound = truncation_error_bound(sigma, n_max);
        const double tail = exact_tail(sigma, n_max);
        CHECK(bound >= tail);
        CHECK(bound <= 1.1 * tail);
    }
}

TEST_CASE("critical_sigma at the estimator defaults") {
    const double sc = critical_sigma(200, 1e-4);
    CHECK(sc == doctest::Approx(0.0226889).epsilon(1e-4));
    CHECK(sc >= 0.022);
    CHECK(sc <= 0.024);
    // the defining inequality holds at the returned sigma and fails just below
    auto satisfied = [](double sigma, int n, double eps) {
        return std::erfc(n * sigma / std::sqrt(2.0)) <= eps * sigma * std::sqrt(kTwoPi);
    };
    CHECK(satisfied(sc, 200, 1e-4));
    CHECK_FALSE(satisfied(sc * (1.0 - 1e-3), 200, 1e-4));
}

TEST_CASE("critical_sigma shrinks with more harmonics and looser tolerance") {
    CHECK(critical_sigma(400, 1e-4) < critical_sigma(200, 1e-4));
    CHECK(critical_sigma(200, 1e-2) < critical_sigma(200, 1e-4));
    CHECK(critical_sigma(200, 1e-6) > critical_sigma(200, 1e-4));
    CHECK_THROWS_AS(critical_sigma(0, 1e-4), std::invalid_argument);
    CHECK_THROWS_AS(critical_sigma(200, 0.0), std::invalid_argument);
}

TEST_CASE("normal_expectation equals the series inner product") {
    Xoshiro256StarStar rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        const WrappedNormal d{rng.uniform(0.0, kTwoPi), rng.uniform(0.05, 1.5)};
        FourierSeries s(6);
        s.set_cos(0, rng.uniform(-1.0, 1.0));
        for (int k = 1; k <= 6; ++k) {
            s.set_cos(k, rng.uniform(-1.0, 1.0));
            s.set_sin(k, rng.uniform(-1.0, 1.0));
        }
        const double closed = normal_expectation(d, s);
        const double via_series = inner_product(to_fourier(d, 64), s);
        CHECK(closed == doctest::Approx(via_series).epsilon(1e-12).scale(1.0));
        const double span = 12.0 * d.sigma;
        const double quad = oracle::simpson(
            [&](double x) { return line_normal(d.mu, d.sigma, x) * s.evaluate(x); }, d.mu - span,
            d.mu + span, 60000);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("posterior_moment matches quadrature on random single-experiment updates") {
    Xoshiro256StarStar rng(22);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const WrappedNormal d{rng.uniform(0.0, kTwoPi), rng.uniform(0.01, 0.5)};
        const int rounds = 1 + static_cast<int>(rng.uniform(0, 3));
        std::vector<int> k;
        std::vector<double> beta;
        MeasurementRecord m;
        for (int r = 0; r < rounds; ++r) {
            k.push_back(1 + static_cast<int>(rng.uniform(0, 8)));
            beta.push_back(rng.uniform(0.0, kTwoPi));
            m.push_back(rng.bernoulli(0.5) ? 1 : 0);
        }
        const FourierSeries L = ideal_likelihood(ExperimentDesign::standard(k, beta), m);
        const double background = rng.uniform(0.0, 1.0);
        const double own_weight = rng.uniform(0.1, 1.0);
        const double marginal = background + own_weight * normal_expectation(d, L);
        const PosteriorMoment pm = posterior_moment(d, L, background, own_weight, marginal);

        const double span = 10.0 * d.sigma;
        auto q = [&](double x) {
            return line_normal(d.mu, d.sigma, x) * (background + own_weight * L.evaluate(x)) /
                   marginal;
        };
        const int n = 40000;
        const double re =
            oracle::simpson([&](double x) { return q(x) * std::cos(x); }, d.mu - span, d.mu + span, n);
        const double im =
            oracle::simpson([&](double x) { return q(x) * std::sin(x); }, d.mu - span, d.mu + span, n);
        const double r = std::hypot(re, im);
        const double expected_mu = wrap_angle(std::atan2(im, re));
        const double expected_sigma = std::sqrt(1.0 / (r * r) - 1.0);

        worst = std::max(worst, circular_distance(pm.mu, expected_mu));
        worst = std::max(worst, std::abs(pm.sigma - expected_sigma));
        CHECK_FALSE(pm.degenerate);
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("posterior_moment flags a degenerate refit and floors sigma") {
    // sigma so small that |<e^{i phi}>| rounds to exactly 1 in double
    // precision (mu = 0 keeps the phasor components exact)
    const WrappedNormal d{0.0, 1e-9};
    const PosteriorMoment pm =
        posterior_moment(d, FourierSeries::constant(1.0), 1.0, 0.0, 1.0);
    CHECK(pm.degenerate);
    CHECK(pm.sigma == 1e-12);
    CHECK(pm.mu == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("posterior_moment rejects an undefined or invalid update") {
    const WrappedNormal d{1.0, 0.3};
    // zero mixture: the posterior has no mass, the mean direction is undefined
    CHECK_THROWS_AS(posterior_moment(d, FourierSeries::uniform(), 0.0, 0.0, 1.0), numeric_error);
    CHECK_THROWS_AS(posterior_moment(d, FourierSeries::uniform(), 1.0, 1.0, 0.0), numeric_error);
    CHECK_THROWS_AS(posterior_moment(d, FourierSeries::uniform(), 1.0, 1.0, -2.0), numeric_error);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(density(WrappedNormal{0.0, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(to_fourier(WrappedNormal{0.0, -1.0}, 10), std::invalid_argument);
    CHECK_THROWS_AS(to_fourier(WrappedNormal{0.0, 1.0}, -1), std::invalid_argument);
}

}  // TEST_SUITE
