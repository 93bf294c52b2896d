#include "fimstab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "fimstab/errors.hpp"

namespace fimstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBracketLo = 2.0;
constexpr double kBracketHi = 6.0;

class MomentMemo {
public:
    Approximant get(Side side, double alpha, const QuadratureSettings& q) {
        const Key key{side == Side::minorant ? 0 : 1, alpha, q.tol};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, Approximant(side, alpha, Family::cubed, q)).first;
        return it->second;
    }

    std::size_t size() {
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.size();
    }

private:
    using Key = std::tuple<int, double, double>;
    std::mutex mutex_;
    std::map<Key, Approximant> cache_;
};

MomentMemo& memo() {
    static MomentMemo instance;
    return instance;
}

}  // namespace

double bound_from_moments(Side side, double alpha, double moment0, double moment2) {
    const double zeroth = moment0 / alpha;
    const double second = -3.0 / (kPi * kPi) * moment2 / (alpha * alpha * alpha);
    return side == Side::minorant ? std::min(zeroth, second) : std::max(zeroth, second);
}

CertifiedBound h_bound_certified(Side side, double alpha, const QuadratureSettings& settings) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    // Moments are computed outside the memo lock; call_once inside Approximant serializes.
    const Approximant g = memo().get(side, alpha, settings);
    const Moments& m = g.moments();
    const double e0 = std::max(m.error0, settings.tol) / alpha;
    const double e2 = 3.0 / (kPi * kPi) * std::max(m.error2, settings.tol) / (alpha * alpha * alpha);
    return {bound_from_moments(side, alpha, m.moment0, m.moment2), std::max(e0, e2)};
}

double h_bound(Side side, double alpha, const QuadratureSettings& settings) {
    return h_bound_certified(side, alpha, settings).value;
}

double stability_threshold(double tolerance, const QuadratureSettings& settings) {
    if (!(tolerance >= 1e-6 && tolerance <= 1e-2)) {
        throw std::invalid_argument("threshold tolerance must lie in [1e-6, 1e-2]");
    }
    const CertifiedBound lo_b = h_bound_certified(Side::minorant, kBracketLo, settings);
    const CertifiedBound hi_b = h_bound_certified(Side::minorant, kBracketHi, settings);
    if (!(lo_b.value + lo_b.error <= 0.0) || !(hi_b.value - hi_b.error > 0.0)) {
        std::ostringstream msg;
        msg << "h_-(alpha) has no certified sign change on [" << kBracketLo << ", " << kBracketHi
            << "]: h_-(" << kBracketLo << ") = " << lo_b.value << " +- " << lo_b.error << ", h_-(" << kBracketHi
            << ") = " << hi_b.value << " +- " << hi_b.error;
        throw NoSignChange(msg.str());
    }
    double lo = kBracketLo;
    double hi = kBracketHi;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (h_bound(Side::minorant, mid, settings) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

BoundCurve bound_curve(double alpha_min, double alpha_max, int steps, const QuadratureSettings& settings) {
    if (!(alpha_min > 0.0) || !(alpha_max > alpha_min) || steps < 2) {
        throw std::invalid_argument("bound curve needs 0 < alpha_min < alpha_max and steps >= 2");
    }
    BoundCurve curve;
    const double h = (alpha_max - alpha_min) / (steps - 1);
    for (int i = 0; i < steps; ++i) {
        const double a = (i + 1 == steps) ? alpha_max : alpha_min + i * h;
        curve.alphas.push_back(a);
        curve.h_minus.push_back(h_bound(Side::minorant, a, settings));
        curve.h_plus.push_back(h_bound(Side::majorant, a, settings));
    }
    return curve;
}

ClassicalBounds classical_v0_bounds(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    return {1.0 - 1.0 / alpha, 1.0 + 1.0 / alpha};
}

std::size_t bound_memo_size() { return memo().size(); }

}  // namespace fimstab
