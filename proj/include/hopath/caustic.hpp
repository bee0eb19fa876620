#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "hopath/config.hpp"
#include "hopath/gaussian_packet.hpp"
#include "hopath/quadrature.hpp"
#include "hopath/spectral.hpp"

namespace hopath {

/// Lattice quantities at a caustic omega T = M pi. The caustic module snaps
/// omega T to exactly M pi; the input only has to be within caustic_tol.
struct CausticState {
    int m_index;
    std::size_t steps;
    double epsilon;                   ///< M pi / 2 - arg sigma(N) > 0
    std::complex<double> z;           ///< conj(sigma)/sigma = (-1)^M e^{2 i epsilon}
    std::complex<double> one_minus_z;
    std::complex<double> one_plus_z;
    double log_sigma_modulus_sq;      ///< log |sigma(N)|^2
};

/// Throws CausticProximity when omega T / pi is not an integer >= 1 within
/// caustic_tol.
CausticState caustic_state(const OscillatorConfig& config, std::size_t steps,
                           double caustic_tol = kCausticTolerance);

/// Leading-order epsilon(N) ~ (M pi / 2)^3 / 3 N^2, for cross-checks.
double epsilon_leading_order(int m_index, std::size_t steps);

struct UVCoordinates {
    double u;  ///< sqrt(m omega / 2 hbar)(x_I + x_F)
    double v;  ///< sqrt(m omega / 2 hbar)(x_I - x_F)
};

UVCoordinates to_uv(const OscillatorConfig& config, double x_initial, double x_final);
/// Inverse of to_uv: returns {x_I, x_F}.
std::pair<double, double> from_uv(const OscillatorConfig& config, UVCoordinates uv);

/// Finite-N caustic kernel in the u/v factorization
///   sqrt(m omega / pi i hbar) e^{-i (M-1) pi / 2} / |sigma| e^{(u^2+v^2)/2}
///   e^{-u^2/(1+z)} / sqrt|1+z| e^{-v^2/(1-z)} / sqrt|1-z|.
std::complex<double> rewrite_kernel_uv(const OscillatorConfig& config, std::size_t steps,
                                       double x_initial, double x_final);

/// int K_N(x_F, x_I) f(x_I) dx_I at a caustic, with the integration variable
/// (v for even M, u for odd M) rotated by -arg(w)/2, w = 1/(1 -+ z), so the
/// oscillating Gaussian e^{-w s^2} becomes the damped e^{-|w| s^2}.
/// Throws NumericalFailure if the quadrature misses its 1e-10 tolerance.
QuadratureResult contour_rotated_smear(const OscillatorConfig& config, std::size_t steps,
                                       const GaussianPacket& f, double x_final);

/// Which kernel to smear: the continuum limit or a finite lattice.
struct ClosedKernel {};
struct LatticeKernel {
    std::size_t steps;
};
using KernelSource = std::variant<ClosedKernel, LatticeKernel>;

/// int K(x_F, x_I; T) f(x_I) dx_I for any T. Closed caustic kernels are
/// sifted exactly; finite-N caustic kernels go through contour_rotated_smear;
/// regular kernels are integrated by adaptive quadrature.
std::complex<double> smeared_kernel(const OscillatorConfig& config, const GaussianPacket& f,
                                    double x_final, const KernelSource& source,
                                    double caustic_tol = kCausticTolerance);

/// e^{-i M pi / 2} f((-1)^M x_F), the smeared value of the caustic delta.
std::complex<double> delta_limit_reference(const OscillatorConfig& config, const GaussianPacket& f,
                                           double x_final, double caustic_tol = kCausticTolerance);

struct DeltaLimitRow {
    std::size_t steps;
    std::complex<double> value;
    double deviation;
};

struct DeltaLimitStudy {
    std::vector<DeltaLimitRow> rows;
    std::complex<double> reference;
    std::size_t converged_steps;  ///< N*: first N with deviation below tol (0 if never)
};

/// Doubles N from `start_steps` until the finite-N smeared caustic kernel is
/// within `tol` of the delta prediction, or `max_steps` is passed.
DeltaLimitStudy delta_limit_study(const OscillatorConfig& config, const GaussianPacket& f,
                                  double x_final, double tol = 1e-3, std::size_t start_steps = 16,
                                  std::size_t max_steps = std::size_t{1} << 24);

/// A test function with the interval outside of which it vanishes.
struct TestFunction {
    std::function<std::complex<double>(double)> eval;
    double lower;
    double upper;

    static TestFunction from(const GaussianPacket& g);
};

struct DeltaCheckRow {
    double r;
    std::complex<double> value;
    double error;  ///< |value - f(0)|
};

struct DeltaCheckReport {
    std::vector<DeltaCheckRow> rows;
    std::complex<double> target;  ///< f(0)
    double fitted_order;          ///< slope of log(error) against log(r), NaN if errors vanish
};

/// int (pi r)^{-1/2} e^{-x^2/r} f(x) dx for each r, compared with f(0).
DeltaCheckReport delta_representation_check(std::span<const double> r_sequence, const TestFunction& f);

}  // namespace hopath
