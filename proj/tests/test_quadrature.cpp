#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fimstab/quadrature.hpp"

using namespace fimstab;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("Gauss-Legendre rule integrates polynomials up to degree 2n-1 exactly") {
    for (int n : {1, 2, 5, 20}) {
        const quad::Rule rule = quad::gauss_legendre(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], deg);
            const double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
            CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("nodes are symmetric and sorted") {
    const quad::Rule& rule = quad::default_rule();
    REQUIRE(rule.nodes.size() == 20);
    for (std::size_t i = 0; i + 1 < rule.nodes.size(); ++i) CHECK(rule.nodes[i] < rule.nodes[i + 1]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.nodes.size() - 1 - i]).epsilon(1e-15));
    }
}

TEST_CASE("adaptive integration of vector-valued integrands") {
    auto f = [](double t) { return std::array<double, 2>{std::sin(t), std::exp(-t)}; };
    const auto est = quad::integrate<2>(f, 0.0, std::numbers::pi, 0.5, {1e-12, 1e-12});
    CHECK(est.value[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(est.value[1] == doctest::Approx(1.0 - std::exp(-std::numbers::pi)).epsilon(1e-14));
    CHECK(est.error[0] < 1e-12);
    CHECK(est.evaluations > 0);
}

TEST_CASE("refinement kicks in for a sharply peaked integrand") {
    // Lorentzian of width 1e-3: integral over [-1, 1] is 2 atan(1000) / 1e-3 * 1e-3.
    const double w = 1e-3;
    auto f = [w](double t) { return std::array<double, 1>{w / (t * t + w * w)}; };
    const auto est = quad::integrate<1>(f, -1.0, 1.0, 2.0, {1e-10}, 30);
    CHECK(est.value[0] == doctest::Approx(2.0 * std::atan(1.0 / w)).epsilon(1e-10));
    CHECK(est.evaluations > 1000);
}

TEST_CASE("empty interval integrates to zero") {
    auto f = [](double) { return std::array<double, 1>{1.0}; };
    CHECK(quad::integrate<1>(f, 1.0, 1.0, 0.5, {1e-12}).value[0] == 0.0);
}

TEST_SUITE_END();
