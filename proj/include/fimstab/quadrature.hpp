#ifndef FIMSTAB_QUADRATURE_HPP
#define FIMSTAB_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace fimstab::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Builds the n-point Gauss-Legendre rule by Newton iteration on P_n.
Rule gauss_legendre(int n);

/// The fixed 20-point rule used by the adaptive integrator.
const Rule& default_rule();

template <std::size_t K>
struct Estimate {
    std::array<double, K> value{};
    std::array<double, K> error{};  // sum of |coarse - refined| over accepted panels
    long evaluations = 0;
};

namespace detail {

template <std::size_t K, class F>
std::array<double, K> apply_rule(const Rule& rule, F& f, double a, double b, long& evals) {
    std::array<double, K> acc{};
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const std::array<double, K> v = f(mid + half * rule.nodes[i]);
        for (std::size_t k = 0; k < K; ++k) acc[k] += rule.weights[i] * v[k];
    }
    for (auto& x : acc) x *= half;
    evals += static_cast<long>(rule.nodes.size());
    return acc;
}

template <std::size_t K, class F>
void refine(const Rule& rule, F& f, double a, double b, const std::array<double, K>& coarse,
            const std::array<double, K>& tol_density, int depth, int max_depth, Estimate<K>& out) {
    const double mid = 0.5 * (a + b);
    const auto left = apply_rule<K>(rule, f, a, mid, out.evaluations);
    const auto right = apply_rule<K>(rule, f, mid, b, out.evaluations);
    bool ok = true;
    std::array<double, K> diff{};
    for (std::size_t k = 0; k < K; ++k) {
        diff[k] = std::abs(left[k] + right[k] - coarse[k]);
        if (diff[k] > tol_density[k] * (b - a)) ok = false;
    }
    if (ok || depth >= max_depth) {
        for (std::size_t k = 0; k < K; ++k) {
            out.value[k] += left[k] + right[k];
            out.error[k] += diff[k];
        }
        return;
    }
    refine<K>(rule, f, a, mid, left, tol_density, depth + 1, max_depth, out);
    refine<K>(rule, f, mid, b, right, tol_density, depth + 1, max_depth, out);
}

}  // namespace detail

/// Integrates a vector-valued f over [a, b] on panels of width <= panel_width.
///
/// Each panel is compared against its two halves and bisected until the
/// difference drops below tol[k] * (panel length) / (b - a) for every
/// component, or max_depth is reached.
template <std::size_t K, class F>
Estimate<K> integrate(F&& f, double a, double b, double panel_width, const std::array<double, K>& tol,
                      int max_depth = 12) {
    Estimate<K> out;
    if (!(b > a)) return out;
    const Rule& rule = default_rule();
    const auto panels = static_cast<long>(std::ceil((b - a) / panel_width));
    const double width = (b - a) / static_cast<double>(panels);
    std::array<double, K> density{};
    for (std::size_t k = 0; k < K; ++k) density[k] = tol[k] / (b - a);
    for (long p = 0; p < panels; ++p) {
        const double lo = a + static_cast<double>(p) * width;
        const double hi = (p + 1 == panels) ? b : lo + width;
        const auto coarse = detail::apply_rule<K>(rule, f, lo, hi, out.evaluations);
        detail::refine<K>(rule, f, lo, hi, coarse, density, 0, max_depth, out);
    }
    return out;
}

}  // namespace fimstab::quad

#endif  // FIMSTAB_QUADRATURE_HPP
