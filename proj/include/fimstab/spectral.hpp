#ifndef FIMSTAB_SPECTRAL_HPP
#define FIMSTAB_SPECTRAL_HPP

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fimstab/extremal.hpp"

namespace fimstab {

using cplx = std::complex<double>;

/// Number of acquired moments N = 2n + 1 and the derivative normalization
/// C_N = sqrt(3 / (pi^2 (N - 1)(N + 1))).
///
/// Storage order of every length-N vector is k = -n..n, i.e. row i holds k = i - n.
struct ProblemSize {
    int N = 0;
    int n = 0;
    double c_norm = 0.0;

    /// Throws std::invalid_argument unless N is odd and N >= 3.
    static ProblemSize from_moments(int N);
};

/// Spike amplitudes c, torus locations tau and the dynamic range kappa.
struct SpikeConfig {
    std::vector<double> tau;
    std::vector<cplx> c;
    double kappa = 1.0;

    std::size_t r() const { return tau.size(); }

    /// Checks 1 <= |c_l| <= kappa, tau in [0, 1), distinct locations and r <= n.
    void validate(const ProblemSize& size) const;
};

/// W(tau) = [V0(tau), V1(tau)], N x 2r.
struct SensitivityMatrix {
    Eigen::MatrixXcd entries;
    ProblemSize size;
    int r = 0;

    auto v0() const { return entries.leftCols(r); }
    auto v1() const { return entries.rightCols(r); }
};

/// J = sigma^-2 diag(1, c)^H W^H W diag(1, c).
struct FisherMatrix {
    Eigen::MatrixXcd entries;
    double sigma2 = 1.0;
};

struct ExtremalPair {
    double min = 0.0;
    double max = 0.0;
};

/// v0(tau) (derivative = false) or the unit-norm derivative atom v1(tau).
Eigen::VectorXcd fourier_vector(const ProblemSize& size, double tau, bool derivative);

/// Minimal wrap-around distance on the torus; +infinity for fewer than two points.
double wraparound_separation(std::span<const double> tau);

/// Throws DuplicateLocation when two locations coincide and
/// std::invalid_argument when r > n.
SensitivityMatrix sensitivity(const ProblemSize& size, std::span<const double> tau);

/// W^H W, 2r x 2r.
Eigen::MatrixXcd gram(const SensitivityMatrix& w);

/// Extremal eigenvalues of (A + A^H) / 2.
ExtremalPair hermitian_extremal(const Eigen::MatrixXcd& a);

/// (sigma_min(W)^2, sigma_max(W)^2) from the Gram matrix.
ExtremalPair gram_extremal(const SensitivityMatrix& w);

FisherMatrix fim(const ProblemSize& size, const SpikeConfig& config, double sigma2);

/// Scales a precomputed Gram matrix into the Fisher matrix for amplitudes c.
FisherMatrix fim_from_gram(const Eigen::MatrixXcd& gram, std::span<const cplx> c, double sigma2);

/// (lambda_min(J), lambda_max(J)).
ExtremalPair fim_extremal_eigs(const FisherMatrix& j);

/// q^H J^-1 q through a Cholesky factorization.
///
/// Throws SingularFisher unless lambda_min(J) > 1e-12 lambda_max(J).
double crlb_linear_form(const FisherMatrix& j, const Eigen::VectorXcd& q);

/// Noiseless observation V0(tau) c.
Eigen::VectorXcd synth_signal(const ProblemSize& size, const SpikeConfig& config);

struct PoissonCheck {
    int l = 0;
    int l2 = 0;
    int p = 0;
    cplx series_value;
    cplx closed_form;

    double residual() const { return std::abs(series_value - closed_form); }
};

/// Truncated series sum_{|k| <= K} X(k D) (i 2 pi k)^p exp(-i 2 pi k (tau_l - tau_l2))
/// against D^-(p+1) X^(p)(0) when l == l2 (zero otherwise), D = wraparound_separation(tau).
///
/// Requires a cubed minorant, r >= 2, N D >= alpha and K >= 10 / D.
PoissonCheck poisson_series_check(const ProblemSize& size, const Approximant& approximant,
                                  std::span<const double> tau, int l, int l2, int p, long K);

/// All (l, l2, p) combinations from one pass over the samples, ordered by (l, l2, p).
std::vector<PoissonCheck> poisson_series_table(const ProblemSize& size, const Approximant& approximant,
                                               std::span<const double> tau, long K);

}  // namespace fimstab

#endif  // FIMSTAB_SPECTRAL_HPP
