#include "fimstab/extremal.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "fimstab/errors.hpp"
#include "fimstab/quadrature.hpp"

namespace fimstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAsymptoticFrom = 10.0;

// sin^2(pi x) / pi^2, with the argument reduced to [-1/2, 1/2] first.
double sin_sq_over_pi_sq(double x) {
    const double r = x - std::nearbyint(x);
    const double s = std::sin(kPi * r) / kPi;
    return s * s;
}

double sinc_sq(double y) {
    if (y == 0.0) return 1.0;
    const double r = y - std::nearbyint(y);
    const double s = std::sin(kPi * r) / (kPi * y);
    return s * s;
}

// Bernoulli-number tail of psi_1 beyond 1/x + 1/(2x^2), valid for x >= 10.
double trigamma_series_remainder(double x) {
    const double z = 1.0 / x;
    const double z2 = z * z;
    // 1/(6x^3) - 1/(30x^5) + 1/(42x^7) - 1/(30x^9) + 5/(66x^11) - 691/(2730x^13) + 7/(6x^15)
    double p = 7.0 / 6.0;
    p = p * z2 - 691.0 / 2730.0;
    p = p * z2 + 5.0 / 66.0;
    p = p * z2 - 1.0 / 30.0;
    p = p * z2 + 1.0 / 42.0;
    p = p * z2 - 1.0 / 30.0;
    p = p * z2 + 1.0 / 6.0;
    return p * z2 * z;
}

double check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be a positive finite number, got " + std::to_string(alpha));
    }
    return alpha;
}

}  // namespace

const char* to_string(Side side) { return side == Side::minorant ? "minorant" : "majorant"; }

const char* to_string(Family family) {
    switch (family) {
        case Family::box: return "box";
        case Family::selberg: return "selberg";
        case Family::cubed: return "cubed";
    }
    return "?";
}

namespace special {

double trigamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("trigamma: argument must be positive");
    double acc = 0.0;
    while (x < kAsymptoticFrom) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    return acc + 1.0 / x + 0.5 / (x * x) + trigamma_series_remainder(x);
}

double beurling_tail_pos(double x) {
    if (!(x > 0.0)) throw std::domain_error("beurling_tail_pos: argument must be positive");
    // E(x) = 1/(x (x+1)^2) + E(x+1): all terms positive.
    double acc = 0.0;
    while (x < kAsymptoticFrom) {
        const double xp = x + 1.0;
        acc += 1.0 / (x * xp * xp);
        x = xp;
    }
    // 1/x + 1/x^2 - psi_1(x) with psi_1 expanded.
    return acc + 0.5 / (x * x) - trigamma_series_remainder(x);
}

double beurling_tail_neg(double x) {
    if (!(x > 0.0)) throw std::domain_error("beurling_tail_neg: argument must be positive");
    if (x < kAsymptoticFrom) return 1.0 / (x * x) - beurling_tail_pos(x);
    return 0.5 / (x * x) + trigamma_series_remainder(x);
}

}  // namespace special

double beurling_excess(double x) {
    if (x == 0.0) return 1.0;  // B(0) = 1, sgn(0) = 0
    if (x > 0.0) {
        if (x < 1e-150) return 0.0;
        return 2.0 * sin_sq_over_pi_sq(x) * special::beurling_tail_pos(x);
    }
    const double y = -x;
    if (y < kAsymptoticFrom) {
        if (y < 1e-150) return 2.0;
        return 2.0 * sinc_sq(y) - 2.0 * sin_sq_over_pi_sq(y) * special::beurling_tail_pos(y);
    }
    return 2.0 * sin_sq_over_pi_sq(y) * special::beurling_tail_neg(y);
}

double beurling(double x) {
    const double sgn = (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    return sgn + beurling_excess(x);
}

double box(double alpha, double t) { return std::abs(t) <= 0.5 * alpha ? 1.0 : 0.0; }

double selberg_box(Side side, double alpha, double t) {
    const double a = 0.5 * alpha;
    auto sgn = [](double v) { return (v > 0.0) ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
    if (side == Side::majorant) {
        const double u = t + a;
        const double v = a - t;
        return 0.5 * (sgn(u) + sgn(v)) + 0.5 * (beurling_excess(u) + beurling_excess(v));
    }
    const double u = -a - t;
    const double v = t - a;
    return -0.5 * (sgn(u) + sgn(v)) - 0.5 * (beurling_excess(u) + beurling_excess(v));
}

double g_approximant(Side side, double alpha, double t) {
    const double s = selberg_box(side, alpha / 3.0, t / 3.0);
    return s * s * s;
}

double evaluate(Family family, Side side, double alpha, double t) {
    switch (family) {
        case Family::box: return box(alpha, t);
        case Family::selberg: return selberg_box(side, alpha, t);
        case Family::cubed: return g_approximant(side, alpha, t);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

// Envelope |B(x) - sgn(x)| <= 1 / (pi^2 (|x| - 1)^2) for |x| > 1 carries over
// to |G(t)| <= (pi^2 s^2)^-3 with s = t/3 - (alpha/6 + 1). These are the
// one-sided tail integrals beyond t = T, i.e. s0 = T/3 - c.
double cubed_tail0(double s0) { return 3.0 / (5.0 * std::pow(kPi, 6) * std::pow(s0, 5)); }

double cubed_tail2(double s0, double c) {
    return 27.0 / std::pow(kPi, 6) *
           (1.0 / (3.0 * std::pow(s0, 3)) + c / (2.0 * std::pow(s0, 4)) + c * c / (5.0 * std::pow(s0, 5)));
}

Moments cubed_moments(Side side, double alpha, const QuadratureSettings& q) {
    const double tol = q.tol;
    const double c = alpha / 6.0 + 1.0;
    const double four_pi_sq = 4.0 * kPi * kPi;
    // Both moments are even integrals: total tail = 2 * one-sided.
    auto tail0 = [&](double s0) { return 2.0 * cubed_tail0(s0); };
    auto tail2 = [&](double s0) { return 2.0 * four_pi_sq * cubed_tail2(s0, c); };
    double s0 = 1.0;
    while (tail0(s0) > 0.5 * tol || tail2(s0) > 0.5 * tol) s0 *= 1.1;
    const double T = 3.0 * (s0 + c);

    auto f = [&](double t) {
        const double g = g_approximant(side, alpha, t);
        return std::array<double, 2>{g, t * t * g};
    };
    const double panel_tol0 = 0.25 * tol;
    const double panel_tol2 = 0.25 * tol / four_pi_sq;
    const auto est = quad::integrate<2>(f, 0.0, T, 1.5, {panel_tol0, panel_tol2});

    Moments m;
    m.moment0 = 2.0 * est.value[0];
    m.moment2 = -2.0 * four_pi_sq * est.value[1];
    m.error0 = tail0(s0) + 2.0 * est.error[0];
    m.error2 = tail2(s0) + 2.0 * four_pi_sq * est.error[1];
    m.meta.half_width = T;
    m.meta.panel_tol = panel_tol0;
    m.meta.tail_bound = tail0(s0) + tail2(s0);
    m.meta.panel_error = 2.0 * est.error[0] + 2.0 * four_pi_sq * est.error[1];
    m.meta.evaluations = est.evaluations;
    return m;
}

Moments box_moments(double alpha) {
    const double a = 0.5 * alpha;
    auto f = [](double t) { return std::array<double, 2>{1.0, t * t}; };
    // Polynomial integrand: a single Gauss-Legendre panel is exact.
    const auto est = quad::integrate<2>(f, -a, a, alpha, {1e-300, 1e-300}, 0);
    Moments m;
    m.moment0 = est.value[0];
    m.moment2 = -4.0 * kPi * kPi * est.value[1];
    m.meta.half_width = a;
    m.meta.evaluations = est.evaluations;
    return m;
}

// Integral of sin^2(pi x)/pi^2 * g(x) over [X, inf) for the Beurling tail
// functions g = E (pos) or F (neg); two integration-by-parts terms are kept.
double oscillating_tail(bool pos, double X) {
    const double z = 1.0 / X;
    const double z2 = z * z;
    // integral of E over [X, inf) = psi(1 + X) - ln X
    const double int_e = z * (0.5 - z * (1.0 / 12.0 - z2 * (1.0 / 120.0 - z2 * (1.0 / 252.0 - z2 / 240.0))));
    const double integral = pos ? int_e : z - int_e;
    const double g = pos ? special::beurling_tail_pos(X) : special::beurling_tail_neg(X);
    const double dg = pos ? (-z2 * z + 0.5 * z2 * z2 - z2 * z2 * z2 / 6.0)
                          : (-z2 * z - 0.5 * z2 * z2 + z2 * z2 * z2 / 6.0);
    const double r = X - std::nearbyint(X);
    const double sin2 = std::sin(2.0 * kPi * r);
    const double cos2 = std::cos(2.0 * kPi * r);
    return (integral + sin2 * g / (2.0 * kPi) + cos2 * dg / (4.0 * kPi * kPi)) / (2.0 * kPi * kPi);
}

Moments selberg_moment0(Side side, double alpha, const QuadratureSettings& q) {
    const double a = 0.5 * alpha;
    const double X0 = 1024.0;
    const double T = a + X0;
    auto f = [&](double t) { return std::array<double, 1>{selberg_box(side, alpha, t)}; };
    const double panel_tol = 0.25 * q.tol;
    const auto est = quad::integrate<1>(f, 0.0, T, 0.5, {panel_tol});
    double tail = 0.0;
    if (side == Side::majorant) {
        tail = oscillating_tail(true, T + a) + oscillating_tail(false, T - a);
    } else {
        tail = -(oscillating_tail(false, T + a) + oscillating_tail(true, T - a));
    }
    // Neglected third integration-by-parts term is O(g''/(8 pi^3)) ~ X^-4.
    const double remainder = 2.0 * 2.0 * std::pow(X0, -4.0);
    Moments m;
    m.moment0 = 2.0 * (est.value[0] + tail);
    m.error0 = 2.0 * est.error[0] + remainder;
    m.moment2 = std::numeric_limits<double>::quiet_NaN();
    m.error2 = std::numeric_limits<double>::infinity();
    m.meta.half_width = T;
    m.meta.panel_tol = panel_tol;
    m.meta.tail_bound = remainder;
    m.meta.panel_error = 2.0 * est.error[0];
    m.meta.evaluations = est.evaluations;
    return m;
}

}  // namespace

Moments compute_moments(Family family, Side side, double alpha, const QuadratureSettings& settings) {
    check_alpha(alpha);
    switch (family) {
        case Family::box: return box_moments(alpha);
        case Family::cubed: return cubed_moments(side, alpha, settings);
        case Family::selberg:
            throw DecayTooSlow("second moment of a Selberg approximant diverges (t^-2 decay)");
    }
    throw std::invalid_argument("unknown family");
}

Moments compute_moment0(Family family, Side side, double alpha, const QuadratureSettings& settings) {
    check_alpha(alpha);
    if (family == Family::selberg) return selberg_moment0(side, alpha, settings);
    return compute_moments(family, side, alpha, settings);
}

double first_moment(Family family, Side side, double alpha, const QuadratureSettings& settings) {
    check_alpha(alpha);
    if (family == Family::selberg) {
        throw DecayTooSlow("first moment of a Selberg approximant is not absolutely convergent");
    }
    const double T = compute_moments(family, side, alpha, settings).meta.half_width;
    auto f = [&](double t) { return std::array<double, 1>{t * evaluate(family, side, alpha, t)}; };
    const double width = family == Family::box ? T : 1.5;
    const auto neg = quad::integrate<1>(f, -T, 0.0, width, {settings.tol});
    const auto pos = quad::integrate<1>(f, 0.0, T, width, {settings.tol});
    return -2.0 * kPi * (neg.value[0] + pos.value[0]);
}

struct Approximant::Cache {
    std::once_flag full_once;
    std::optional<Moments> full;
    std::once_flag m0_once;
    std::optional<Moments> m0;
};

Approximant::Approximant(Side side, double alpha, Family family, QuadratureSettings settings)
    : side_(side), alpha_(check_alpha(alpha)), family_(family), settings_(settings),
      cache_(std::make_shared<Cache>()) {}

const Moments& Approximant::moments() const {
    std::call_once(cache_->full_once, [this] { cache_->full = compute_moments(family_, side_, alpha_, settings_); });
    return *cache_->full;
}

double Approximant::moment0() const {
    if (family_ != Family::selberg) return moments().moment0;
    std::call_once(cache_->m0_once, [this] { cache_->m0 = compute_moment0(family_, side_, alpha_, settings_); });
    return cache_->m0->moment0;
}

QuadratureMeta Approximant::quadrature_meta() const {
    if (family_ == Family::selberg) {
        moment0();
        return cache_->m0->meta;
    }
    return moments().meta;
}

}  // namespace fimstab
