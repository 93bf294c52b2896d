#include "fimstab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fimstab/errors.hpp"

namespace fimstab {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(-i 2 pi k tau) with k tau reduced mod 1 before scaling by 2 pi.
cplx unit_phase(int k, double tau) {
    const double x = static_cast<double>(k) * tau;
    const double frac = x - std::nearbyint(x);
    const double phi = -2.0 * kPi * frac;
    return {std::cos(phi), std::sin(phi)};
}

void fill_column(const ProblemSize& size, double tau, bool derivative, Eigen::Ref<Eigen::VectorXcd> out) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(size.N));
    for (int i = 0; i < size.N; ++i) {
        const int k = i - size.n;
        const cplx e = unit_phase(k, tau) * scale;
        if (!derivative) {
            out(i) = e;
        } else {
            out(i) = size.c_norm * cplx(0.0, -2.0 * kPi * k) * e;
        }
    }
}

}  // namespace

ProblemSize ProblemSize::from_moments(int N) {
    if (N < 3 || N % 2 == 0) {
        throw std::invalid_argument("number of moments must be odd and >= 3, got " + std::to_string(N));
    }
    ProblemSize s;
    s.N = N;
    s.n = (N - 1) / 2;
    const double nm1 = N - 1.0;
    const double np1 = N + 1.0;
    s.c_norm = std::sqrt(3.0 / (kPi * kPi * nm1 * np1));
    return s;
}

void SpikeConfig::validate(const ProblemSize& size) const {
    if (tau.empty()) throw std::invalid_argument("spike configuration needs at least one location");
    if (c.size() != tau.size()) throw std::invalid_argument("amplitude and location counts differ");
    if (!(kappa >= 1.0)) throw std::invalid_argument("dynamic range kappa must be >= 1");
    if (static_cast<int>(tau.size()) > size.n) {
        throw std::invalid_argument("r = " + std::to_string(tau.size()) + " exceeds n = " + std::to_string(size.n));
    }
    for (double t : tau) {
        if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("locations must lie in [0, 1)");
    }
    constexpr double slack = 1e-12;
    for (const cplx& a : c) {
        const double m = std::abs(a);
        if (m < 1.0 - slack || m > kappa * (1.0 + slack)) {
            throw std::invalid_argument("amplitude modulus outside [1, kappa]");
        }
    }
    if (tau.size() >= 2 && wraparound_separation(tau) == 0.0) {
        throw DuplicateLocation("spike locations must be distinct");
    }
}

Eigen::VectorXcd fourier_vector(const ProblemSize& size, double tau, bool derivative) {
    Eigen::VectorXcd v(size.N);
    fill_column(size, tau, derivative, v);
    return v;
}

double wraparound_separation(std::span<const double> tau) {
    if (tau.size() < 2) return std::numeric_limits<double>::infinity();
    std::vector<double> pts;
    pts.reserve(tau.size());
    for (double t : tau) pts.push_back(t - std::floor(t));
    std::sort(pts.begin(), pts.end());
    double best = 1.0 - (pts.back() - pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, pts[i] - pts[i - 1]);
    return best;
}

SensitivityMatrix sensitivity(const ProblemSize& size, std::span<const double> tau) {
    const int r = static_cast<int>(tau.size());
    if (r < 1) throw std::invalid_argument("sensitivity matrix needs at least one location");
    if (r > size.n) {
        throw std::invalid_argument("r = " + std::to_string(r) + " exceeds n = " + std::to_string(size.n));
    }
    if (r >= 2 && wraparound_separation(tau) == 0.0) throw DuplicateLocation("spike locations must be distinct");
    SensitivityMatrix w;
    w.size = size;
    w.r = r;
    w.entries.resize(size.N, 2 * r);
    for (int l = 0; l < r; ++l) {
        fill_column(size, tau[l], false, w.entries.col(l));
        fill_column(size, tau[l], true, w.entries.col(r + l));
    }
    return w;
}

Eigen::MatrixXcd gram(const SensitivityMatrix& w) { return w.entries.adjoint() * w.entries; }

ExtremalPair hermitian_extremal(const Eigen::MatrixXcd& a) {
    const Eigen::MatrixXcd sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
    const auto& ev = solver.eigenvalues();  // ascending
    return {ev(0), ev(ev.size() - 1)};
}

ExtremalPair gram_extremal(const SensitivityMatrix& w) { return hermitian_extremal(gram(w)); }

FisherMatrix fim_from_gram(const Eigen::MatrixXcd& g, std::span<const cplx> c, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("noise variance must be positive");
    const auto r = static_cast<Eigen::Index>(c.size());
    if (g.rows() != 2 * r || g.cols() != 2 * r) throw std::invalid_argument("Gram size does not match amplitudes");
    Eigen::VectorXcd d(2 * r);
    d.head(r).setOnes();
    for (Eigen::Index l = 0; l < r; ++l) d(r + l) = c[static_cast<std::size_t>(l)];
    FisherMatrix j;
    j.sigma2 = sigma2;
    j.entries = (d.conjugate().asDiagonal() * g * d.asDiagonal()) / sigma2;
    return j;
}

FisherMatrix fim(const ProblemSize& size, const SpikeConfig& config, double sigma2) {
    config.validate(size);
    const SensitivityMatrix w = sensitivity(size, config.tau);
    return fim_from_gram(gram(w), config.c, sigma2);
}

ExtremalPair fim_extremal_eigs(const FisherMatrix& j) { return hermitian_extremal(j.entries); }

double crlb_linear_form(const FisherMatrix& j, const Eigen::VectorXcd& q) {
    if (q.size() != j.entries.rows()) throw std::invalid_argument("linear form has the wrong length");
    if (q.norm() == 0.0) throw std::invalid_argument("linear form must be nonzero");
    const ExtremalPair e = fim_extremal_eigs(j);
    if (!(e.min > 1e-12 * e.max)) {
        throw SingularFisher("Fisher matrix is not positive definite (lambda_min = " + std::to_string(e.min) + ")");
    }
    const Eigen::MatrixXcd sym = 0.5 * (j.entries + j.entries.adjoint());
    Eigen::LLT<Eigen::MatrixXcd> llt(sym);
    if (llt.info() != Eigen::Success) throw SingularFisher("Cholesky factorization of the Fisher matrix failed");
    const Eigen::VectorXcd y = llt.matrixL().solve(q);
    return y.squaredNorm();
}

Eigen::VectorXcd synth_signal(const ProblemSize& size, const SpikeConfig& config) {
    config.validate(size);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(size.N);
    Eigen::VectorXcd col(size.N);
    for (std::size_t l = 0; l < config.r(); ++l) {
        fill_column(size, config.tau[l], false, col);
        y += config.c[l] * col;
    }
    return y;
}

namespace {

struct SeriesSetup {
    double delta = 0.0;
    std::vector<double> samples;  // X(k delta), k = 0..K
};

SeriesSetup prepare_series(const ProblemSize& size, const Approximant& x, std::span<const double> tau, long K) {
    if (x.family() != Family::cubed || x.side() != Side::minorant) {
        throw std::invalid_argument("Poisson check expects a cubed minorant");
    }
    if (tau.size() < 2) throw std::invalid_argument("Poisson check needs at least two locations");
    SeriesSetup s;
    s.delta = wraparound_separation(tau);
    if (s.delta == 0.0) throw DuplicateLocation("spike locations must be distinct");
    if (size.N * s.delta < x.alpha() * (1.0 - 1e-12)) {
        throw std::invalid_argument("separation N * Delta is below the approximant's alpha");
    }
    if (static_cast<double>(K) < 10.0 / s.delta) throw std::invalid_argument("truncation K must be >= 10 / Delta");
    s.samples.resize(static_cast<std::size_t>(K) + 1);
    for (long k = 0; k <= K; ++k) s.samples[static_cast<std::size_t>(k)] = x(static_cast<double>(k) * s.delta);
    return s;
}

// Pairs the +k and -k terms; every pair is real for the even function X.
double paired_sum(const SeriesSetup& s, double offset, int p) {
    const double d = offset - std::nearbyint(offset);
    double acc = 0.0;
    const auto K = static_cast<long>(s.samples.size()) - 1;
    for (long k = K; k >= 1; --k) {
        const double x = s.samples[static_cast<std::size_t>(k)];
        if (x == 0.0) continue;
        const double kd = static_cast<double>(k) * d;
        const double theta = 2.0 * kPi * (kd - std::nearbyint(kd));
        const double kk = static_cast<double>(k);
        switch (p) {
            case 0: acc += 2.0 * x * std::cos(theta); break;
            case 1: acc += 4.0 * kPi * kk * x * std::sin(theta); break;
            default: acc += -8.0 * kPi * kPi * kk * kk * x * std::cos(theta); break;
        }
    }
    if (p == 0) acc += s.samples[0];
    return acc;
}

PoissonCheck make_check(const SeriesSetup& s, const Approximant& x, std::span<const double> tau, int l, int l2,
                        int p) {
    PoissonCheck c;
    c.l = l;
    c.l2 = l2;
    c.p = p;
    c.series_value = paired_sum(s, tau[static_cast<std::size_t>(l)] - tau[static_cast<std::size_t>(l2)], p);
    if (l == l2) {
        const double dinv = 1.0 / s.delta;
        switch (p) {
            case 0: c.closed_form = dinv * x.moment0(); break;
            case 1: c.closed_form = 0.0; break;
            default: c.closed_form = dinv * dinv * dinv * x.moment2(); break;
        }
    } else {
        c.closed_form = 0.0;
    }
    return c;
}

}  // namespace

PoissonCheck poisson_series_check(const ProblemSize& size, const Approximant& approximant,
                                  std::span<const double> tau, int l, int l2, int p, long K) {
    const int r = static_cast<int>(tau.size());
    if (l < 0 || l >= r || l2 < 0 || l2 >= r) throw std::out_of_range("spike index out of range");
    if (p < 0 || p > 2) throw std::invalid_argument("derivative order p must be 0, 1 or 2");
    const SeriesSetup s = prepare_series(size, approximant, tau, K);
    return make_check(s, approximant, tau, l, l2, p);
}

std::vector<PoissonCheck> poisson_series_table(const ProblemSize& size, const Approximant& approximant,
                                               std::span<const double> tau, long K) {
    const SeriesSetup s = prepare_series(size, approximant, tau, K);
    const int r = static_cast<int>(tau.size());
    std::vector<PoissonCheck> out;
    out.reserve(static_cast<std::size_t>(r * r * 3));
    for (int l = 0; l < r; ++l)
        for (int l2 = 0; l2 < r; ++l2)
            for (int p = 0; p <= 2; ++p) out.push_back(make_check(s, approximant, tau, l, l2, p));
    return out;
}

}  // namespace fimstab
