#pragma once

// Reference values computed independently of the library quadratures, so the
// library can be tested against numbers it had no hand in producing. The
// frozen constants below were cross-checked against the closed forms
//   int_0^1 dv / (a + b cos 2 pi v) = 1 / sqrt(a^2 - b^2)   (a > b >= 0)
// and are asserted against the adaptive integrator before anything else runs.

#include <cmath>
#include <functional>

namespace oracle {

// sqrt(3) and 1/sqrt(3), shortest round-trip decimals.
inline constexpr double kSqrt3 = 1.7320508075688772;
inline constexpr double kInvSqrt3 = 0.5773502691896258;
// Speed gap of the (a, b) = (2, 1) cosine forcing: 2 - sqrt(3).
inline constexpr double kSpeedGap21 = 0.2679491924311228;

// Adaptive Simpson with interval halving until the standard 1/15 error
// estimate drops below tol. Plain recursion, no reuse tricks: slow and simple
// on purpose.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 28) {
    const auto simpson = [&](double l, double r) {
        return (r - l) / 6.0 * (f(l) + 4.0 * f(0.5 * (l + r)) + f(r));
    };
    const double whole = simpson(a, b);
    const double mid = 0.5 * (a + b);
    const double left = simpson(a, mid);
    const double right = simpson(mid, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, mid, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace oracle
