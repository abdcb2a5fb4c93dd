#include <cmath>
#include <vector>

#include "bqpe/errors.hpp"
#include "bqpe/rng.hpp"
#include "bqpe/weight_solver.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bqpe;

namespace {

LikelihoodLedger random_ledger(Xoshiro256StarStar& rng, int m, int entries) {
    LikelihoodLedger ledger(m);
    std::vector<double> c(m);
    for (int l = 0; l < entries; ++l) {
        for (double& v : c) v = rng.uniform(0.01, 1.0);
        ledger.append(c);
    }
    return ledger;
}

std::vector<double> random_interior_point(Xoshiro256StarStar& rng, int m) {
    std::vector<double> x(m);
    double total = 0.0;
    for (double& v : x) {
        v = rng.uniform(0.05, 1.0);
        total += v;
    }
    for (double& v : x) v /= total;
    return x;
}

double norm2(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

}  // namespace

TEST_SUITE("weight-solver") {

TEST_CASE("ledger stores entries in order and validates them") {
    LikelihoodLedger ledger(3);
    CHECK(ledger.size() == 0);
    ledger.append(std::vector<double>{0.1, 0.2, 0.3});
    ledger.append(std::vector<double>{0.0, 0.0, 1.0});
    CHECK(ledger.size() == 2);
    CHECK(ledger.entry(1)[2] == 1.0);
    CHECK_THROWS_AS(ledger.append(std::vector<double>{0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(ledger.append(std::vector<double>{0.1, -0.2, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(ledger.append(std::vector<double>{0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ledger.entry(2), std::out_of_range);
    CHECK_THROWS_AS(LikelihoodLedger(0), std::invalid_argument);
}

TEST_CASE("nll matches a direct evaluation") {
    LikelihoodLedger ledger(2);
    ledger.append(std::vector<double>{0.5, 0.1});
    ledger.append(std::vector<double>{0.2, 0.8});
    const std::vector<double> x = {0.3, 0.7};
    const double expected = -(std::log(0.5 * 0.3 + 0.1 * 0.7) + std::log(0.2 * 0.3 + 0.8 * 0.7)) / 2;
    CHECK(nll(ledger, x) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("nll on an empty ledger is zero with zero gradient") {
    LikelihoodLedger ledger(2);
    const std::vector<double> x = {0.5, 0.5};
    CHECK(nll(ledger, x) == 0.0);
    const std::vector<double> g = nll_gradient(ledger, x);
    CHECK(g == std::vector<double>{0.0, 0.0});
}

TEST_CASE("nll rejects points with nonpositive mixture probability") {
    LikelihoodLedger ledger(2);
    ledger.append(std::vector<double>{1.0, 0.0});
    const std::vector<double> x = {0.0, 1.0};
    CHECK_THROWS_AS(nll(ledger, x), numeric_error);
    CHECK_THROWS_AS(nll_gradient(ledger, x), numeric_error);
}

TEST_CASE("nll_gradient matches central finite differences") {
    Xoshiro256StarStar rng(61);
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
        const int m = 2 + static_cast<int>(rng.uniform(0, 3));
        const LikelihoodLedger ledger = random_ledger(rng, m, 40);
        const std::vector<double> x = random_interior_point(rng, m);
        const std::vector<double> g = nll_gradient(ledger, x);
        const double h = 1e-6;
        for (int i = 0; i < m; ++i) {
            std::vector<double> xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (nll(ledger, xp) - nll(ledger, xm)) / (2 * h);
            const double rel = std::abs(g[i] - fd) / std::max(1.0, std::abs(fd));
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("project_simplex frozen example") {
    const std::vector<double> out = project_simplex(std::vector<double>{0.6, 0.1, 0.1});
    // shift is (1 - 0.8)/3 = 1/15
    CHECK(out[0] == doctest::Approx(0.6 + 1.0 / 15).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(0.1 + 1.0 / 15).epsilon(1e-15));
    CHECK(out[2] == doctest::Approx(0.1 + 1.0 / 15).epsilon(1e-15));
}

TEST_CASE("project_simplex clips strongly negative coordinates") {
    const std::vector<double> out = project_simplex(std::vector<double>{2.0, -3.0});
    CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out[1] == 0.0);
}

TEST_CASE("project_simplex matches the face-enumeration oracle") {
    Xoshiro256StarStar rng(62);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int m = 2 + static_cast<int>(rng.uniform(0, 2));
        std::vector<double> x(m);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        const std::vector<double> fast = project_simplex(x);
        const std::vector<double> slow = oracle::project_simplex_faces(x);
        worst = std::max(worst, norm2(fast, slow));
        // simplex membership
        double total = 0.0;
        for (double v : fast) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("project_simplex output satisfies the KKT conditions") {
    Xoshiro256StarStar rng(68);
    for (int rep = 0; rep < 200; ++rep) {
        const int m = 2 + static_cast<int>(rng.uniform(0, 4));
        std::vector<double> x(m);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        const std::vector<double> p = project_simplex(x);
        double total = 0.0;
        // recover theta from any strictly positive coordinate
        double theta = 0.0;
        bool have_theta = false;
        for (int i = 0; i < m; ++i) {
            total += p[i];
            if (!have_theta && p[i] > 1e-12) {
                theta = p[i] - x[i];
                have_theta = true;
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(have_theta);
        for (int i = 0; i < m; ++i) {
            if (p[i] > 0.0) {
                CHECK(p[i] == doctest::Approx(x[i] + theta).epsilon(1e-10));
            } else {
                CHECK(x[i] + theta <= 1e-10);
            }
        }
    }
}

TEST_CASE("rescaling the ledger leaves the minimizer unchanged") {
    Xoshiro256StarStar rng(69);
    const int m = 3;
    LikelihoodLedger a(m), b(m);
    std::vector<double> c(m);
    const double scale = 37.5;
    for (int l = 0; l < 50; ++l) {
        for (double& v : c) v = rng.uniform(0.01, 1.0);
        a.append(c);
        for (double& v : c) v *= scale;
        b.append(c);
    }
    const std::vector<double> x0 = random_interior_point(rng, m);
    const std::vector<double> xa = solve_weights(a, x0);
    const std::vector<double> xb = solve_weights(b, x0);
    CHECK(norm2(xa, xb) <= 1e-6);
    // scaling every entry shifts the objective down by exactly log(scale)
    CHECK(nll(a, xa) - nll(b, xa) == doctest::Approx(std::log(scale)).epsilon(1e-12));
}

TEST_CASE("project_simplex is idempotent and order-equivariant") {
    Xoshiro256StarStar rng(63);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x(3);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        const std::vector<double> p = project_simplex(x);
        const std::vector<double> pp = project_simplex(p);
        CHECK(norm2(p, pp) <= 1e-15);
        const std::vector<double> swapped = {x[1], x[0], x[2]};
        const std::vector<double> ps = project_simplex(swapped);
        CHECK(ps[0] == doctest::Approx(p[1]).epsilon(1e-15));
        CHECK(ps[1] == doctest::Approx(p[0]).epsilon(1e-15));
    }
}

TEST_CASE("solve_weights drives a single-support ledger to the vertex") {
    LikelihoodLedger ledger(2);
    for (int i = 0; i < 10; ++i) ledger.append(std::vector<double>{1.0, 0.0});
    const std::vector<double> x = solve_weights(ledger, std::vector<double>{0.5, 0.5});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("solve_weights matches the grid-refinement oracle objective") {
    Xoshiro256StarStar rng(64);
    for (int rep = 0; rep < 12; ++rep) {
        const int m = 2 + static_cast<int>(rng.uniform(0, 3));  // 2..4
        const LikelihoodLedger ledger = random_ledger(rng, m, 60);
        const std::vector<double> x0 = random_interior_point(rng, m);
        const std::vector<double> solved = solve_weights(ledger, x0);
        const std::vector<double> reference = oracle::minimize_on_simplex(
            [&](const std::vector<double>& v) {
                double eps_guard = 0.0;
                for (double vi : v) eps_guard = std::min(eps_guard, vi);
                if (eps_guard < 0.0) return 1e18;  // outside the domain
                double acc = 0.0;
                for (std::int64_t l = 0; l < ledger.size(); ++l) {
                    const auto c = ledger.entry(l);
                    double p = 0.0;
                    for (int i = 0; i < m; ++i) p += c[i] * v[i];
                    if (!(p > 0.0)) return 1e18;
                    acc -= std::log(p);
                }
                return acc / static_cast<double>(ledger.size());
            },
            m, m <= 3 ? 1000 : 50);
        CHECK(nll(ledger, solved) <= nll(ledger, reference) + 1e-8);
        double total = 0.0;
        for (double v : solved) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("solve_weights never increases the objective from its start") {
    Xoshiro256StarStar rng(65);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 3;
        const LikelihoodLedger ledger = random_ledger(rng, m, 30);
        const std::vector<double> x0 = random_interior_point(rng, m);
        const std::vector<double> solved = solve_weights(ledger, x0);
        CHECK(nll(ledger, solved) <= nll(ledger, x0) + 1e-15);
    }
}

TEST_CASE("both line-search variants reach the same objective") {
    Xoshiro256StarStar rng(66);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = 3;
        const LikelihoodLedger ledger = random_ledger(rng, m, 50);
        const std::vector<double> x0 = random_interior_point(rng, m);
        SolveOptions curvilinear;
        SolveOptions single;
        single.single_projection = true;
        const double f1 = nll(ledger, solve_weights(ledger, x0, curvilinear));
        const double f2 = nll(ledger, solve_weights(ledger, x0, single));
        CHECK(f1 == doctest::Approx(f2).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("warm-started resolve terminates at the same point") {
    Xoshiro256StarStar rng(67);
    const LikelihoodLedger ledger = random_ledger(rng, 3, 50);
    const std::vector<double> first = solve_weights(ledger, random_interior_point(rng, 3));
    const std::vector<double> again = solve_weights(ledger, first);
    CHECK(norm2(first, again) <= 1e-7);
}

TEST_CASE("solve_weights on an empty ledger returns the projected start") {
    LikelihoodLedger ledger(3);
    const std::vector<double> x = solve_weights(ledger, std::vector<double>{2.0, 0.0, 0.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x[1] == 0.0);
    CHECK(x[2] == 0.0);
}

TEST_CASE("should_solve follows the exponential schedule") {
    // dense prefix
    for (std::int64_t it = 1; it <= 8; ++it) CHECK(should_solve(it, 8));
    // afterwards only at doubled multiples of the period
    CHECK(should_solve(16, 8));
    CHECK(should_solve(32, 8));
    CHECK(should_solve(64, 8));
    CHECK_FALSE(should_solve(9, 8));
    CHECK_FALSE(should_solve(24, 8));  // multiple of 8 but not 8 * 2^a
    CHECK_FALSE(should_solve(48, 8));
    CHECK_FALSE(should_solve(63, 8));
    CHECK_THROWS_AS(should_solve(0, 8), std::invalid_argument);
    CHECK_THROWS_AS(should_solve(5, 0), std::invalid_argument);
}

TEST_CASE("solve count over a budget follows period + log2(budget/period)") {
    auto count_solves = [](std::int64_t budget, std::int64_t period) {
        std::int64_t count = 0;
        for (std::int64_t it = 1; it <= budget; ++it) {
            if (should_solve(it, period)) ++count;
        }
        return count;
    };
    CHECK(count_solves(100, 8) == 8 + 3);     // 16, 32, 64
    CHECK(count_solves(30000, 512) == 512 + 5);  // 1024..16384
    CHECK(count_solves(8, 8) == 8);
    CHECK(count_solves(10000, 512) == 512 + 4);  // 1024..8192
}

}  // TEST_SUITE
