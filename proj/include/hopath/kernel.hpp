#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hopath/config.hpp"
#include "hopath/signed_log.hpp"
#include "hopath/spectral.hpp"

namespace hopath {

/// sigma(n) = (1 + i omega T / 2n)^n with its argument n atan(omega T / 2n)
/// kept unwrapped.
struct SigmaValue {
    std::size_t n;
    std::complex<double> value;
    double arg;
    double log_modulus;  ///< log |sigma| = (n/2) log(1 + (omega T / 2n)^2)
};

SigmaValue sigma(const OscillatorConfig& config, std::size_t n);

/// D_0..D_{N-1}, the leading principal minors of the fluctuation matrix,
/// from D_{n+1} = 2 alpha D_n - beta^2 D_{n-1}.
struct DeterminantSequence {
    std::vector<SignedLog> values;

    const SignedLog& last() const { return values.back(); }
};

DeterminantSequence determinant_sequence(const OscillatorConfig& config, const Discretization& disc);

/// D_{N-1} = (N / omega T) Im sigma^2(N), evaluated through sinc so the
/// free particle (D = N) is covered.
SignedLog determinant_closed_form(const OscillatorConfig& config, const Discretization& disc);

/// A complex number held as magnitude and unwrapped phase. The Maslov part
/// of the phase, -L pi / 2, is kept as a separate term.
struct PhasedAmplitude {
    double magnitude = 0.0;
    double phase = 0.0;         ///< total phase, radians, not reduced mod 2 pi
    double maslov_phase = 0.0;  ///< -L pi / 2, included in phase
    int maslov_index = 0;

    std::complex<double> value() const { return std::polar(magnitude, phase); }
};

struct RegularKernel {
    std::complex<double> amplitude;
    double magnitude;
    double phase;
    double maslov_phase;
    int maslov_index;
};

/// K = exp(-i M pi / 2) delta(x_F - (-1)^M x_I).
struct CausticDelta {
    int m_index;
    double maslov_phase;  ///< -M pi / 2
    int parity;           ///< (-1)^M
};

using KernelValue = std::variant<RegularKernel, CausticDelta>;

/// Fluctuation prefactor
///   Q = sqrt(m omega / 2 pi i hbar) e^{-i L pi / 2} / sqrt(|Im sigma^2|)
/// with L taken as the finite-N negative count in `spectrum`. Only positive
/// reals are square-rooted; 1/sqrt(i) and the Maslov factor are phases.
/// Throws CausticProximity when |Im sigma^2| is unresolvable (< 1e-14 |sigma|^2).
PhasedAmplitude fluctuation_factor(const OscillatorConfig& config, const Discretization& disc,
                                   const Spectrum& spectrum);

/// Same prefactor from the eigenvalue product route,
///   sqrt(m / 2 pi i hbar dt) e^{-i L pi / 2} / sqrt(prod |lambda_k|).
PhasedAmplitude fluctuation_factor_from_eigenvalues(const OscillatorConfig& config,
                                                    const Discretization& disc);

/// Classical lattice action via sigma:
///   S_c = (m omega / 2)(cos 2 theta (x_I^2 + x_F^2) - 2 x_I x_F) / sin 2 theta,
/// theta = arg sigma(N). Exact at finite N.
double classical_action(const OscillatorConfig& config, const Discretization& disc);

/// Same action from the minors:
///   (m / 2 dt){(alpha - beta^2 D_{N-2}/D_{N-1})(x_I^2 + x_F^2) - (beta^N / D_{N-1}) 2 x_I x_F}.
double classical_action_recursion(const OscillatorConfig& config, const Discretization& disc);

/// The endpoint-independent parts of a regular kernel (lattice or
/// continuum): K(x_I, x_F) = prefactor exp(i coupling (c (x_I^2 + x_F^2) - 2 x_I x_F) / hbar).
struct PropagatorForm {
    PhasedAmplitude prefactor;
    double coupling;   ///< m omega / (2 sin 2 theta), or m / 2T for the free particle
    double diagonal;   ///< cos 2 theta (1 for the free particle)
    double hbar;
    double parity = 1.0;  ///< sign of cos 2 theta near its nearest multiple of pi
    double defect = 0.0;  ///< parity * diagonal = 1 - defect

    double action(double x_initial, double x_final) const {
        const double d = x_initial - parity * x_final;
        return coupling * parity * (d * d - defect * (x_initial * x_initial + x_final * x_final));
    }
    RegularKernel operator()(double x_initial, double x_final) const;
};

/// Lattice form at N; same failure modes as lattice_kernel.
PropagatorForm lattice_propagator(const OscillatorConfig& config, const Discretization& disc);

/// Continuum form; throws CausticProximity at a caustic.
PropagatorForm closed_form_propagator(const OscillatorConfig& config, double caustic_tol = kCausticTolerance);

/// Finite-N lattice kernel Q exp(i S_c / hbar) with no caustic guard. Throws
/// CausticProximity only if the fluctuation determinant vanishes numerically.
RegularKernel lattice_kernel(const OscillatorConfig& config, const Discretization& disc);

/// Caustic-guarded lattice kernel: rejects |sin omega T| < 1e-6 or
/// omega T / pi within caustic_tol of an integer >= 1 (omega = 0 is never rejected).
KernelValue discrete_kernel(const OscillatorConfig& config, const Discretization& disc,
                            double caustic_tol = kCausticTolerance);

/// Continuum propagator at any T: the extended Mehler form with its
/// e^{-i M pi / 2} factor off caustics, the delta form on them, and the free
/// kernel for omega = 0.
KernelValue closed_form_kernel(const OscillatorConfig& config, double caustic_tol = kCausticTolerance);

/// True when discrete_kernel would refuse these parameters.
bool near_caustic(const OscillatorConfig& config, double caustic_tol = kCausticTolerance);

/// The delta form with M = round(omega T / pi) when near_caustic holds.
std::optional<CausticDelta> routed_caustic(const OscillatorConfig& config,
                                           double caustic_tol = kCausticTolerance);

struct ConvergenceRow {
    std::size_t steps;
    double abs_error;
    double rel_error;
    double local_order;  ///< -log2(error ratio) w.r.t. the previous row (NaN for the first)
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double fitted_slope;  ///< least-squares slope of log(error) against log(N)
};

/// Throws CausticProximity at caustic times. Points are evaluated in parallel.
ConvergenceStudy convergence_study(const OscillatorConfig& config, std::span<const std::size_t> ladder);

/// Kernel value as a plain complex number. Throws for CausticDelta.
std::complex<double> amplitude_of(const KernelValue& k);

}  // namespace hopath
