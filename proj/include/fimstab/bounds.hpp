#ifndef FIMSTAB_BOUNDS_HPP
#define FIMSTAB_BOUNDS_HPP

#include <vector>

#include "fimstab/extremal.hpp"

namespace fimstab {

/// Bound value together with the error inherited from the moment quadrature.
struct CertifiedBound {
    double value = 0.0;
    double error = 0.0;
};

/// min (minorant) or max (majorant) of { m0 / alpha, -3 m2 / (pi^2 alpha^3) }.
///
/// Plugging in the box itself (m0 = alpha, m2 = -pi^2 alpha^3 / 3) gives 1.
double bound_from_moments(Side side, double alpha, double moment0, double moment2);

/// h_-(alpha) or h_+(alpha) from the cubed Selberg approximants.
///
/// Moments are memoized per (side, alpha, quadrature tolerance) across calls
/// and threads. The reported error is never below settings.tol.
CertifiedBound h_bound_certified(Side side, double alpha, const QuadratureSettings& settings = {});

double h_bound(Side side, double alpha, const QuadratureSettings& settings = {});

/// Smallest alpha in [2, 6] with h_-(alpha) > 0, located by bisection to
/// within `tolerance` (which must lie in [1e-6, 1e-2]).
///
/// Throws NoSignChange unless h_-(2) <= 0 < h_-(6) holds beyond the
/// quadrature error.
double stability_threshold(double tolerance, const QuadratureSettings& settings = {});

struct BoundCurve {
    std::vector<double> alphas;
    std::vector<double> h_minus;
    std::vector<double> h_plus;
};

/// h_-/h_+ on `steps` uniformly spaced points from alpha_min to alpha_max inclusive.
BoundCurve bound_curve(double alpha_min, double alpha_max, int steps, const QuadratureSettings& settings = {});

struct ClassicalBounds {
    double lower = 0.0;  // 1 - 1/alpha
    double upper = 0.0;  // 1 + 1/alpha
};

/// Selberg-based bounds on sigma_min(V0)^2 and sigma_max(V0)^2.
ClassicalBounds classical_v0_bounds(double alpha);

/// Number of approximants currently held by the moment memo (for tests).
std::size_t bound_memo_size();

}  // namespace fimstab

#endif  // FIMSTAB_BOUNDS_HPP
