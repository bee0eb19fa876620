#pragma once

#include <cmath>
#include <numbers>

namespace hopath::detail {

inline constexpr double kPi = std::numbers::pi;

/// sin(x) / x with the removable singularity filled in.
inline double sinc(double x) {
    if (std::fabs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

/// atan(a) / a, continuous at a = 0.
inline double atanc(double a) {
    if (std::fabs(a) < 1e-4) {
        const double a2 = a * a;
        return 1.0 - a2 / 3.0 + a2 * a2 / 5.0;
    }
    return std::atan(a) / a;
}

/// a - atan(a) without cancellation for small a.
inline double a_minus_atan(double a) {
    if (std::fabs(a) < 0.1) {
        // a^3/3 - a^5/5 + a^7/7 - ...
        const double a2 = a * a;
        double term = a * a2;
        double sum = 0.0;
        for (int k = 0; k < 12; ++k) {
            const double contrib = term / (3.0 + 2.0 * k);
            sum += (k % 2 == 0) ? contrib : -contrib;
            term *= a2;
        }
        return sum;
    }
    return a - std::atan(a);
}

/// x - m pi with pi carried to twice double precision; x = u v exactly as a product.
inline double minus_multiple_of_pi(double u, double v, int m) {
    constexpr double pi_lo = 1.2246467991473532e-16;
    const double hi = m * kPi;
    const double hi_err = std::fma(static_cast<double>(m), kPi, -hi);
    return std::fma(u, v, -hi) - hi_err - m * pi_lo;
}

inline int parity_sign(int m) { return (m % 2 == 0) ? 1 : -1; }

/// -m pi / 2, with m = 0 giving +0.
inline double maslov_angle(int m) { return m == 0 ? 0.0 : -0.5 * kPi * m; }

}  // namespace hopath::detail
