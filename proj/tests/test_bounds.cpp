#include "doctest.h"

#include <cmath>
#include <thread>
#include <vector>

#include "fimstab/bounds.hpp"
#include "fimstab/errors.hpp"
#include "oracles.hpp"

using namespace fimstab;
using oracle::pi;

TEST_SUITE("bound formula") {
    TEST_CASE("the box itself gives exactly one") {
        for (double alpha : {0.5, 1.0, 4.0, 10.0}) {
            const double m0 = alpha;
            const double m2 = -pi * pi * alpha * alpha * alpha / 3.0;
            CHECK(bound_from_moments(Side::minorant, alpha, m0, m2) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(bound_from_moments(Side::majorant, alpha, m0, m2) == doctest::Approx(1.0).epsilon(1e-15));
        }
    }

    TEST_CASE("takes the min for minorants and the max for majorants") {
        // m0 / alpha = 0.5, -3 m2 / (pi^2 alpha^3) = 0.25
        const double alpha = 2.0;
        const double m2 = -0.25 * pi * pi * alpha * alpha * alpha / 3.0;
        CHECK(bound_from_moments(Side::minorant, alpha, 1.0, m2) == doctest::Approx(0.25));
        CHECK(bound_from_moments(Side::majorant, alpha, 1.0, m2) == doctest::Approx(0.5));
    }
}

TEST_SUITE("h bounds") {
    TEST_CASE("golden values") {
        // Independent scipy evaluation of the same bound; frozen.
        struct Row {
            double alpha, minus, plus;
        };
        const Row rows[] = {
            {2.0, -0.056047863449881725, 5.445290284746625},
            {4.0, 0.021510867208142524, 2.7109696619629893},
            {6.0, 0.10151620906674107, 2.1154225483146925},
            {10.0, 0.2952725499577471, 1.6989050207775729},
        };
        for (const Row& r : rows) {
            CHECK(std::abs(h_bound(Side::minorant, r.alpha) - r.minus) <= 1e-9);
            CHECK(std::abs(h_bound(Side::majorant, r.alpha) - r.plus) <= 1e-9);
        }
    }

    TEST_CASE("sign at the threshold examples") {
        CHECK(h_bound(Side::minorant, 3.54) > 0.0);
        CHECK(h_bound(Side::minorant, 2.0) <= 0.0);
    }

    TEST_CASE("minorant bound below one and majorant bound above one") {
        for (double alpha = 0.5; alpha <= 40.0; alpha *= 1.3) {
            CHECK(h_bound(Side::minorant, alpha) <= 1.0);
            CHECK(h_bound(Side::majorant, alpha) >= 1.0);
        }
    }

    TEST_CASE("certified error is at least the quadrature tolerance") {
        const CertifiedBound b = h_bound_certified(Side::minorant, 5.0, {1e-8});
        CHECK(b.error >= 1e-8 / 5.0 * 0.999);
        CHECK(b.value == doctest::Approx(h_bound(Side::minorant, 5.0)).epsilon(1e-6));
    }

    TEST_CASE("memo is keyed by side, alpha and tolerance") {
        const std::size_t before = bound_memo_size();
        h_bound(Side::majorant, 7.123);
        const std::size_t once = bound_memo_size();
        h_bound(Side::majorant, 7.123);
        CHECK(bound_memo_size() == once);
        CHECK(once == before + 1);
        h_bound(Side::majorant, 7.123, {1e-9});
        CHECK(bound_memo_size() == once + 1);
    }

    TEST_CASE("concurrent callers see the same value") {
        std::vector<double> values(4);
        std::vector<std::thread> pool;
        for (int i = 0; i < 4; ++i) pool.emplace_back([&values, i] { values[i] = h_bound(Side::minorant, 8.77); });
        for (auto& t : pool) t.join();
        for (double v : values) CHECK(v == values[0]);
    }

    TEST_CASE("rejects non-positive alpha") {
        CHECK_THROWS_AS(h_bound(Side::minorant, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(h_bound(Side::majorant, -1.0), std::invalid_argument);
    }
}

TEST_SUITE("threshold") {
    TEST_CASE("lands near 3.54") {
        const double a = stability_threshold(1e-3);
        CHECK(a >= 3.45);
        CHECK(a <= 3.60);
        CHECK(h_bound(Side::minorant, a + 0.01) > 0.0);
        CHECK(h_bound(Side::minorant, a - 0.01) <= 0.0);
    }

    TEST_CASE("refinement is consistent") {
        const double coarse = stability_threshold(1e-2);
        const double fine = stability_threshold(1e-5);
        CHECK(std::abs(coarse - fine) <= 0.02);
    }

    TEST_CASE("invariant under halving the quadrature tolerance") {
        const double tol = 1e-4;
        const double a = stability_threshold(tol, {1e-10});
        const double b = stability_threshold(tol, {5e-11});
        CHECK(std::abs(a - b) <= 2.0 * tol);
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(stability_threshold(0.5), std::invalid_argument);
        CHECK_THROWS_AS(stability_threshold(1e-8), std::invalid_argument);
        CHECK_THROWS_AS(stability_threshold(1e-3, {1.0}), NoSignChange);
    }
}

TEST_SUITE("bound curve") {
    TEST_CASE("monotone on the stable range") {
        const BoundCurve c = bound_curve(3.54, 16.0, 50);
        REQUIRE(c.alphas.size() == 50);
        CHECK(c.alphas.front() == 3.54);
        CHECK(c.alphas.back() == 16.0);
        for (std::size_t i = 1; i < c.alphas.size(); ++i) {
            CHECK(c.h_minus[i] >= c.h_minus[i - 1]);
            CHECK(c.h_plus[i] <= c.h_plus[i - 1]);
        }
        CHECK(c.h_minus.back() <= 1.0);
        CHECK(c.h_plus.back() >= 1.0);
        for (double v : c.h_plus) CHECK(v > 0.0);
    }

    TEST_CASE("monotone on a wide grid") {
        const BoundCurve c = bound_curve(2.0, 32.0, 61);
        int bad = 0;
        for (std::size_t i = 1; i < c.alphas.size(); ++i) {
            bad += c.h_minus[i] < c.h_minus[i - 1];
            bad += c.h_plus[i] > c.h_plus[i - 1];
        }
        CHECK(bad == 0);
    }

    TEST_CASE("invalid grids") {
        CHECK_THROWS_AS(bound_curve(0.0, 5.0, 10), std::invalid_argument);
        CHECK_THROWS_AS(bound_curve(5.0, 4.0, 10), std::invalid_argument);
        CHECK_THROWS_AS(bound_curve(1.0, 4.0, 1), std::invalid_argument);
    }
}

TEST_SUITE("classical bounds") {
    TEST_CASE("values") {
        const ClassicalBounds a = classical_v0_bounds(2.0);
        CHECK(a.lower == doctest::Approx(0.5));
        CHECK(a.upper == doctest::Approx(1.5));
        const ClassicalBounds b = classical_v0_bounds(1.0);
        CHECK(b.lower == doctest::Approx(0.0));
        CHECK(b.upper == doctest::Approx(2.0));
        const ClassicalBounds c = classical_v0_bounds(1e6);
        CHECK(c.lower == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(c.upper == doctest::Approx(1.0).epsilon(1e-6));
    }
}
