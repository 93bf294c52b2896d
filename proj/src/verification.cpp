#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fimstab/bounds.hpp"
#include "fimstab/errors.hpp"
#include "fimstab/experiments.hpp"

namespace fimstab {

namespace {

struct SuiteContext {
    const VerificationOptions& options;
    Rng rng;

    bool full() const { return options.level == Level::full; }

    ProblemSize size(int N) const {
        ProblemSize s = ProblemSize::from_moments(N);
        s.c_norm *= options.c_norm_scale;
        return s;
    }

    std::uint64_t draw_seed() { return rng.next(); }
};

CheckResult make(std::string name, double residual, double tolerance, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tolerance;
    c.passed = std::isfinite(residual) && residual <= tolerance;
    c.detail = std::move(detail);
    return c;
}

CheckResult check_unit_columns(SuiteContext& ctx) {
    std::vector<int> sizes{3, 5, 31, 101};
    if (ctx.full()) sizes.push_back(1001);
    double worst = 0.0;
    for (int N : sizes) {
        const ProblemSize size = ctx.size(N);
        const int r = std::min(size.n, 6);
        std::vector<double> tau(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) tau[static_cast<std::size_t>(j)] = (j + ctx.rng.uniform()) / r;
        const SensitivityMatrix w = sensitivity(size, tau);
        for (Eigen::Index c = 0; c < w.entries.cols(); ++c) {
            worst = std::max(worst, std::abs(w.entries.col(c).norm() - 1.0));
        }
    }
    return make("unit_columns", worst, 1e-12, "max | ||column|| - 1 |");
}

CheckResult check_closed_form_fim(SuiteContext& ctx) {
    double worst = 0.0;
    const ProblemSize size = ctx.size(ctx.full() ? 1001 : 101);
    for (int trial = 0; trial < 20; ++trial) {
        SpikeConfig cfg;
        cfg.tau = {ctx.rng.uniform()};
        cfg.kappa = 5.0;
        cfg.c = gen_amplitudes(1, cfg.kappa, ctx.draw_seed());
        const double sigma2 = 0.25 + 4.0 * ctx.rng.uniform();
        const FisherMatrix j = fim(size, cfg, sigma2);
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(2, 2);
        expected(0, 0) = 1.0 / sigma2;
        expected(1, 1) = std::norm(cfg.c[0]) / sigma2;
        worst = std::max(worst, (j.entries - expected).cwiseAbs().maxCoeff());
    }
    return make("closed_form_fim_r1", worst, 1e-12, "max |J - diag(1, |c|^2)/sigma2|");
}

CheckResult check_gram_vs_svd(SuiteContext& ctx) {
    const int instances = ctx.full() ? 50 : 20;
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        const int N = 2 * (8 + static_cast<int>(ctx.rng.uniform() * 24)) + 1;  // 17..63
        const ProblemSize size = ctx.size(N);
        const int r = 1 + static_cast<int>(ctx.rng.uniform() * std::min(8, size.n));
        std::vector<double> tau(static_cast<std::size_t>(r));
        for (auto& t : tau) t = ctx.rng.uniform();
        if (r >= 2 && wraparound_separation(tau) == 0.0) continue;
        const SensitivityMatrix w = sensitivity(size, tau);
        const ExtremalPair e = gram_extremal(w);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w.entries);
        const auto& sv = svd.singularValues();
        const double smax = sv(0) * sv(0);
        const double smin = sv(sv.size() - 1) * sv(sv.size() - 1);
        worst = std::max({worst, std::abs(e.min - smin), std::abs(e.max - smax)});
    }
    return make("gram_vs_svd", worst, 1e-8, "max |lambda(W^H W) - sigma(W)^2| over random N <= 64, r <= 8");
}

CheckResult check_classical_v0(SuiteContext& ctx) {
    const int N = ctx.full() ? 1001 : 101;
    const int trials = ctx.full() ? 100 : 20;
    const ProblemSize size = ctx.size(N);
    double worst = -std::numeric_limits<double>::infinity();
    for (double alpha : {1.5, 2.0, 4.0}) {
        const ClassicalBounds b = classical_v0_bounds(alpha);
        const int r = empirical_spike_count(N, alpha);
        for (int t = 0; t < trials; ++t) {
            const auto tau = gen_separated_tau(N, r, alpha, Placement::exact_min_gap, ctx.draw_seed());
            const SensitivityMatrix w = sensitivity(size, tau);
            const ExtremalPair e = hermitian_extremal(w.v0().adjoint() * w.v0());
            worst = std::max({worst, b.lower - e.min, e.max - b.upper});
        }
    }
    return make("classical_v0_bounds", worst, 1e-10, "max violation of 1 -+ 1/alpha");
}

CheckResult check_singular_value_sandwich(SuiteContext& ctx) {
    std::vector<int> sizes{101};
    if (ctx.full()) sizes.push_back(1001);
    const int trials = ctx.full() ? 50 : 10;
    double worst = -std::numeric_limits<double>::infinity();
    for (int N : sizes) {
        const ProblemSize size = ctx.size(N);
        for (double alpha : {4.0, 6.0, 10.0}) {
            const double lo = h_bound(Side::minorant, alpha, ctx.options.quadrature);
            const double hi = h_bound(Side::majorant, alpha, ctx.options.quadrature);
            const int r = empirical_spike_count(N, alpha);
            for (int t = 0; t < trials; ++t) {
                const auto tau = gen_separated_tau(N, r, alpha, Placement::exact_min_gap, ctx.draw_seed());
                const ExtremalPair e = gram_extremal(sensitivity(size, tau));
                worst = std::max({worst, lo - e.min, e.max - hi});
            }
        }
    }
    return make("singular_value_sandwich", worst, 1e-8, "max violation of h_- <= sigma_min^2, sigma_max^2 <= h_+");
}

CheckResult check_fim_and_crlb(SuiteContext& ctx) {
    const int N = ctx.full() ? 1001 : 101;
    const int trials = ctx.full() ? 20 : 5;
    const ProblemSize size = ctx.size(N);
    double worst = -std::numeric_limits<double>::infinity();
    for (double alpha : {4.0, 6.0, 10.0}) {
        const double lo = h_bound(Side::minorant, alpha, ctx.options.quadrature);
        const double hi = h_bound(Side::majorant, alpha, ctx.options.quadrature);
        const int r = empirical_spike_count(N, alpha);
        for (int t = 0; t < trials; ++t) {
            const double kappa = (t % 2 == 0) ? 1.0 : 3.0;
            const double sigma2 = (t % 3 == 0) ? 1.0 : 4.0;
            Rng rng(ctx.draw_seed());
            SpikeConfig cfg;
            cfg.tau = gen_separated_tau(N, r, alpha, Placement::exact_min_gap, rng);
            cfg.c = gen_amplitudes(r, kappa, rng);
            cfg.kappa = kappa;
            const FisherMatrix j = fim(size, cfg, sigma2);
            const ExtremalPair ev = fim_extremal_eigs(j);
            worst = std::max({worst, lo / sigma2 - ev.min, ev.max - kappa * kappa * hi / sigma2});
            Eigen::VectorXcd q = Eigen::VectorXcd::Zero(2 * r);
            for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
            q.normalize();
            const double crlb = crlb_linear_form(j, q);
            // Relative violations of 1/lambda_max <= crlb <= 1/lambda_min <= sigma2/h_-.
            worst = std::max({worst, (1.0 / ev.max - crlb) * ev.max, (crlb - 1.0 / ev.min) * ev.min,
                              (crlb - sigma2 / lo) * lo / sigma2});
        }
    }
    return make("fim_eigen_and_crlb_bounds", worst, 1e-8,
                "max violation of sigma^-2 h_- <= lambda(J) <= sigma^-2 kappa^2 h_+ and CRLB sandwich");
}

CheckResult check_approximant_sandwich(SuiteContext& ctx) {
    const double step = ctx.full() ? 0.01 : 0.05;
    const long count = static_cast<long>(std::llround(100.0 / step));
    double worst = -std::numeric_limits<double>::infinity();
    for (double alpha : {3.0, 9.0, 15.0}) {
        for (long i = 0; i <= count; ++i) {
            const double t = -50.0 + static_cast<double>(i) * step;
            const double b = box(alpha, t);
            worst = std::max({worst, g_approximant(Side::minorant, alpha, t) - b,
                              b - g_approximant(Side::majorant, alpha, t)});
        }
    }
    return make("approximant_sandwich", worst, 0.0, "max violation of G_- <= I <= G_+ on |t| <= 50");
}

CheckResult check_evenness(SuiteContext& ctx) {
    const double step = ctx.full() ? 0.01 : 0.05;
    const long count = static_cast<long>(std::llround(50.0 / step));
    double worst = 0.0;
    for (double alpha : {3.0, 9.0, 15.0}) {
        for (long i = 0; i <= count; ++i) {
            const double t = static_cast<double>(i) * step;
            for (Family f : {Family::selberg, Family::cubed}) {
                for (Side s : {Side::minorant, Side::majorant}) {
                    worst = std::max(worst, std::abs(evaluate(f, s, alpha, t) - evaluate(f, s, alpha, -t)));
                }
            }
        }
    }
    return make("evenness", worst, 1e-12, "max |f(t) - f(-t)| for Selberg and cubed approximants");
}

CheckResult check_box_moments() {
    double worst = 0.0;
    for (double alpha : {1.0, 4.0, 10.0}) {
        const Moments m = compute_moments(Family::box, Side::minorant, alpha);
        const double m2 = -std::numbers::pi * std::numbers::pi * alpha * alpha * alpha / 3.0;
        worst = std::max({worst, std::abs(m.moment0 - alpha), std::abs(m.moment2 - m2)});
    }
    return make("box_moments", worst, 1e-10, "|(m0, m2) - (alpha, -pi^2 alpha^3 / 3)|");
}

CheckResult check_poisson(SuiteContext& ctx) {
    const int N = 31;
    const double alpha = 6.0;
    const long K = ctx.full() ? 1'000'000 : 100'000;
    const ProblemSize size = ctx.size(N);
    const std::vector<double> tau{0.1, 0.1 + alpha / N, 0.6};
    const Approximant x(Side::minorant, alpha, Family::cubed, ctx.options.quadrature);
    double worst = 0.0;
    for (const PoissonCheck& c : poisson_series_table(size, x, tau, K)) worst = std::max(worst, c.residual());
    std::ostringstream detail;
    detail << "N=31, alpha=6, 3 spikes, K=" << K;
    return make("poisson_identity", worst, 1e-6, detail.str());
}

CheckResult check_bound_monotonicity(SuiteContext& ctx) {
    const int steps = ctx.full() ? 61 : 16;
    const BoundCurve curve = bound_curve(2.0, 32.0, steps, ctx.options.quadrature);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.alphas.size(); ++i) {
        worst = std::max({worst, curve.h_minus[i] - 1.0, 1.0 - curve.h_plus[i]});
        if (i > 0) {
            worst = std::max({worst, curve.h_minus[i - 1] - curve.h_minus[i], curve.h_plus[i] - curve.h_plus[i - 1]});
        }
    }
    return make("bound_monotonicity", worst, 0.0, "h_- non-decreasing, h_+ non-increasing, h_- <= 1 <= h_+");
}

CheckResult check_threshold(SuiteContext& ctx) {
    try {
        const double a = stability_threshold(1e-3, ctx.options.quadrature);
        const double violation = std::max(3.45 - a, a - 3.60);
        std::ostringstream detail;
        detail << "alpha* = " << a << ", expected in [3.45, 3.60]";
        return make("stability_threshold", violation, 0.0, detail.str());
    } catch (const NoSignChange& e) {
        return make("stability_threshold", std::numeric_limits<double>::infinity(), 0.0, e.what());
    }
}

}  // namespace

bool VerificationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerificationReport run_verification_suite(const VerificationOptions& options) {
    SuiteContext ctx{options, Rng(splitmix64(options.seed))};
    VerificationReport report;
    auto run = [&](auto&& fn) {
        try {
            report.checks.push_back(fn());
        } catch (const std::exception& e) {
            report.checks.push_back(make("error", std::numeric_limits<double>::infinity(), 0.0, e.what()));
        }
    };
    run([&] { return check_unit_columns(ctx); });
    run([&] { return check_closed_form_fim(ctx); });
    run([&] { return check_gram_vs_svd(ctx); });
    run([&] { return check_classical_v0(ctx); });
    run([&] { return check_singular_value_sandwich(ctx); });
    run([&] { return check_fim_and_crlb(ctx); });
    run([&] { return check_approximant_sandwich(ctx); });
    run([&] { return check_evenness(ctx); });
    run([] { return check_box_moments(); });
    run([&] { return check_poisson(ctx); });
    run([&] { return check_bound_monotonicity(ctx); });
    run([&] { return check_threshold(ctx); });
    return report;
}

}  // namespace fimstab
