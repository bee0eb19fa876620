#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace hopath {

using ComplexIntegrand = std::function<std::complex<double>(double)>;

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b], bisecting the panel with the
/// largest error until the summed estimate drops below abs_tol.
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b, double abs_tol,
                                    std::size_t max_panels = 4000);

/// Integrates a function that decays away from `center`: starts on
/// [center - half_width, center + half_width] and appends shells of the same
/// width on both sides until a shell contributes less than abs_tol / 100.
QuadratureResult integrate_decaying(const ComplexIntegrand& f, double center, double half_width,
                                    double abs_tol, std::size_t max_shells = 64);

}  // namespace hopath
