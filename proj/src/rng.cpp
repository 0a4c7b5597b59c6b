#include "chaoskit/rng.hpp"

#include <cmath>
#include <numbers>

namespace ck {

namespace {

// Phi(x) via the complementary error function; accurate in both tails
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        if (u == 0.0) return -HUGE_VAL;
        if (u == 1.0) return HUGE_VAL;
        return NAN;
    }
    // work on the lower half and mirror; Hastings' rational start, then
    // Newton steps against erfc-based Phi to full double accuracy
    const bool upper = u > 0.5;
    const double q = upper ? 1.0 - u : u;
    const double t = std::sqrt(-2.0 * std::log(q));
    double x = -(t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t)));
    for (int it = 0; it < 4; ++it) {
        const double err = normal_cdf(x) - q;
        const double step = err / normal_pdf(x);
        x -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return upper ? -x : x;
}

}  // namespace ck
