#pragma once

#include <cmath>
#include <limits>

namespace hopath {

/// A real number stored as sign and natural log of its magnitude. Used for
/// long products (determinants, powers of beta) that leave double range.
struct SignedLog {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLog from(double x) noexcept {
        if (x == 0.0) return {};
        return {std::log(std::fabs(x)), x < 0.0 ? -1 : 1};
    }
    static SignedLog one() noexcept { return {0.0, 1}; }

    bool is_zero() const noexcept { return sign == 0; }
    double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

    friend SignedLog operator*(SignedLog a, SignedLog b) noexcept {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.log_abs + b.log_abs, a.sign * b.sign};
    }
    friend SignedLog operator/(SignedLog a, SignedLog b) noexcept {
        return {a.log_abs - b.log_abs, a.sign * b.sign};
    }
};

/// |log a - log b|, i.e. the relative difference of the magnitudes to first
/// order. Infinite when the signs differ.
inline double log_distance(SignedLog a, SignedLog b) noexcept {
    if (a.sign != b.sign) return std::numeric_limits<double>::infinity();
    if (a.sign == 0) return 0.0;
    return std::fabs(a.log_abs - b.log_abs);
}

}  // namespace hopath
