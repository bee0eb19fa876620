#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hopath/config.hpp"
#include "hopath/gaussian_packet.hpp"
#include "hopath/kernel.hpp"

// Ground-truth computations that never use the spectral or recursion
// machinery of the kernel module.

namespace hopath {

/// Regularization and grid for the brute-force Fresnel integral. The same
/// uniform grid on [-box_halfwidth, box_halfwidth] serves every epsilon.
struct QuadratureSpec {
    std::vector<double> damping_epsilons;  ///< strictly decreasing, > 0, at least 3
    double box_halfwidth = 0.0;
    std::size_t points_per_dim = 0;        ///< >= 64

    /// Throws InvalidArgument for a malformed spec.
    void validate() const;

    /// A ladder eps_j = eps_0 0.6^j (seven rungs) with eps_0 a quarter of
    /// m lambda / 2 hbar dt, lambda the smaller of the free-lattice minimum and
    /// 1 / ||A^{-1}||_F (CausticProximity if A is singular), a box where
    /// e^{-eps_min x^2} < 1e-11, and a grid resolving the largest phase
    /// gradient of the integrand on that box.
    static QuadratureSpec automatic(const OscillatorConfig& config, const Discretization& disc);
};

struct FresnelResult {
    std::complex<double> value;                    ///< extrapolated to eps -> 0
    std::vector<std::complex<double>> regularized; ///< one per epsilon
    std::complex<double> lower_order_value;        ///< extrapolant without the largest epsilon
    double extrapolation_residual;                 ///< |value - lower_order_value|
    QuadratureSpec spec;
};

/// (m / 2 pi i hbar dt)^{N/2} int d^{N-1}x exp(i S / hbar - eps sum x^2) on a
/// tensor trapezoid grid, summed link by link (the integrand is a product of
/// nearest-neighbour factors), then log I(eps) is extrapolated to eps = 0.
/// N must be 2, 3 or 4. Throws NumericalFailure when the extrapolation
/// residual exceeds 1e-4 of the value.
FresnelResult brute_force_fresnel(const OscillatorConfig& config, const Discretization& disc,
                                  std::optional<QuadratureSpec> spec = std::nullopt);

/// The same finite-N kernel from dense linear algebra on the materialized
/// quadratic form: x_c = -A^{-1} b by Gaussian elimination, Sylvester inertia
/// and |det A| from the LDL^T pivots, S_c = S(x_c).
RegularKernel assembled_kernel(const OscillatorConfig& config, const Discretization& disc);

struct GridSpec {
    double half_width;
    std::size_t points;
};

struct EvolvedWavefunction {
    std::vector<double> grid;
    std::vector<std::complex<double>> values;
    double spacing;
    double half_width;
    std::size_t steps;
    double step_time;
    double max_spacing;  ///< resolution bound the grid had to satisfy
};

/// Repeatedly applies the exact short-time propagator (the Mehler form with
/// omega dt < pi, the free kernel for omega = 0) to the packet on a uniform
/// grid. Requires omega T / steps < pi. Without an explicit grid, the extent
/// covers the packet's orbit plus ten maximal widths and the spacing is
/// pi hbar s / (2 m x_max), s = sin(omega dt)/omega. Throws InvalidArgument
/// when a supplied grid is coarser than that bound.
EvolvedWavefunction step_composition_evolve(const OscillatorConfig& config, const GaussianPacket& packet,
                                            std::size_t steps, std::optional<GridSpec> grid = std::nullopt);

/// sqrt(int |psi - reference|^2 dx) over the grid, by the trapezoid rule.
double l2_deviation(const EvolvedWavefunction& psi,
                    const std::function<std::complex<double>(double)>& reference);

struct CausticPhaseCheck {
    int m_index;
    double expected_phase;   ///< -M pi / 2
    double measured_phase;   ///< arg <f((-1)^M x), psi>
    int parity;              ///< (-1)^M
    double l2_deviation;     ///< || psi - e^{-i M pi/2} f((-1)^M x) ||
};

/// Evolves the packet to T = M pi / omega by step composition and compares
/// it with the parity-mapped, phase-shifted input.
CausticPhaseCheck measure_caustic_phase(const OscillatorConfig& config, const GaussianPacket& packet,
                                        int m_index, std::size_t steps);

/// Normalized Hermite functions h_0..h_{n_max}(xi) by the recurrence
///   h_{n+1} = xi sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}.
std::vector<double> hermite_functions(std::size_t n_max, double xi);

struct ExpansionResult {
    std::complex<double> value;
    double tail_estimate;  ///< largest |term| among the last eight
    std::size_t n_max;
};

/// sum_{n <= n_max} phi_n(x_F) e^{-i omega (n + 1/2) T} <phi_n, f>, the
/// smeared propagator from the oscillator eigenbasis. Throws
/// InvalidArgument for omega = 0 and NumericalFailure when the tail
/// estimate exceeds tail_tol.
ExpansionResult eigenfunction_expansion_kernel(const OscillatorConfig& config, std::size_t n_max,
                                               const GaussianPacket& f, double x_final,
                                               double tail_tol = 1e-6);

}  // namespace hopath
