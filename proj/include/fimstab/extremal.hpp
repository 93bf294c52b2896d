#ifndef FIMSTAB_EXTREMAL_HPP
#define FIMSTAB_EXTREMAL_HPP

#include <memory>

namespace fimstab {

enum class Side { minorant, majorant };

/// Which function of the box-approximation family an Approximant evaluates.
///  - box:     the indicator I_alpha of [-alpha/2, alpha/2]
///  - selberg: Selberg's 1-bandlimited minorant/majorant (t^-2 tails)
///  - cubed:   (selberg_{alpha/3}(t/3))^3, 1-bandlimited with t^-6 tails
enum class Family { box, selberg, cubed };

const char* to_string(Side side);
const char* to_string(Family family);

struct QuadratureSettings {
    double tol = 1e-10;  // absolute target for each moment (tail + panels)
};

struct QuadratureMeta {
    double half_width = 0.0;   // integration runs over [-T, T]
    double panel_tol = 0.0;
    double tail_bound = 0.0;   // certified bound on the neglected tails (moment0, moment2 summed)
    double panel_error = 0.0;  // sum of coarse/refined panel disagreements
    long evaluations = 0;
};

struct Moments {
    double moment0 = 0.0;  // integral of f = f^(0)
    double moment2 = 0.0;  // f^''(0) = -4 pi^2 integral of t^2 f
    double error0 = 0.0;   // absolute error bound on moment0
    double error2 = 0.0;
    QuadratureMeta meta;
};

namespace special {

/// Trigamma psi_1(x) for x > 0.
double trigamma(double x);

/// 1/x - psi_1(1 + x) for x > 0, computed without cancellation.
double beurling_tail_pos(double x);

/// 1/x^2 - beurling_tail_pos(x) for x > 0.
double beurling_tail_neg(double x);

}  // namespace special

/// Beurling's 1-bandlimited majorant of sgn(x).
double beurling(double x);

/// B(x) - sgn(x), accurate in the tails where B(x) itself rounds to +-1.
double beurling_excess(double x);

/// Indicator of [-alpha/2, alpha/2].
double box(double alpha, double t);

/// Selberg minorant/majorant of I_alpha; integrates to alpha -+ 1.
double selberg_box(Side side, double alpha, double t);

/// (selberg_box(side, alpha/3, t/3))^3.
double g_approximant(Side side, double alpha, double t);

/// Evaluates any member of the family.
double evaluate(Family family, Side side, double alpha, double t);

/// Zeroth and second Fourier moments at the origin.
///
/// Throws DecayTooSlow for Family::selberg, whose second moment diverges.
Moments compute_moments(Family family, Side side, double alpha, const QuadratureSettings& settings = {});

/// Zeroth moment only; available for every family. The Selberg integral is
/// finished with an asymptotic expansion of its oscillating t^-2 tail.
Moments compute_moment0(Family family, Side side, double alpha, const QuadratureSettings& settings = {});

/// -i 2 pi integral of t f(t), integrated over the negative and positive
/// half-lines separately. Cubed and box families only.
double first_moment(Family family, Side side, double alpha, const QuadratureSettings& settings = {});

/// A member of the box-approximation family with lazily cached moments.
///
/// Copies share the cache; computation happens once per cache and is safe
/// to trigger from several threads.
class Approximant {
public:
    Approximant(Side side, double alpha, Family family = Family::cubed, QuadratureSettings settings = {});

    Side side() const { return side_; }
    double alpha() const { return alpha_; }
    Family family() const { return family_; }
    const QuadratureSettings& settings() const { return settings_; }

    double operator()(double t) const { return evaluate(family_, side_, alpha_, t); }

    const Moments& moments() const;
    double moment0() const;
    double moment2() const { return moments().moment2; }
    QuadratureMeta quadrature_meta() const;

private:
    struct Cache;
    Side side_;
    double alpha_;
    Family family_;
    QuadratureSettings settings_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace fimstab

#endif  // FIMSTAB_EXTREMAL_HPP
