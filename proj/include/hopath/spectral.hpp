#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hopath/config.hpp"
#include "hopath/lattice_action.hpp"

namespace hopath {

/// omega T / pi is treated as an integer when it lies this close to one.
inline constexpr double kCausticTolerance = 1e-9;

/// Classification of the propagation time alone (no lattice).
struct TimeClass {
    int m_index = 0;       ///< M = [omega T / pi]
    int maslov_l = 0;      ///< L = M off caustics, M - 1 on them
    bool at_caustic = false;
};

/// Throws InvalidArgument on an invalid config. omega = 0 is the free
/// particle: M = L = 0 and never a caustic.
TimeClass classify_time(const OscillatorConfig& config, double caustic_tol = kCausticTolerance);

struct Spectrum {
    std::vector<double> eigenvalues;  ///< lambda_1..lambda_{N-1}, increasing
    std::optional<double> zero_crossing;
    int negative_count = 0;           ///< direct sign count at this N
    int m_index = 0;
    int maslov_l = 0;
    bool at_caustic = false;
    /// True when the finite-N sign count equals the asymptotic L.
    bool counts_consistent = true;
};

/// lambda_k = 2(alpha - beta cos(k pi / N)), k = 1..N-1, evaluated in the
/// factored form 4 beta sin(theta_k - phi) sin(theta_k + phi) with
/// theta_k = k pi / 2N and phi = atan(omega dt / 2). The factored form keeps
/// full relative precision for the eigenvalues near zero.
std::vector<double> eigenvalues_closed_form(const OscillatorConfig& config, const Discretization& disc);

/// Literal cosine form 2(alpha - beta cos(k pi / N)).
std::vector<double> eigenvalues_cosine_form(const OscillatorConfig& config, const Discretization& disc);

/// Literal half-angle form 4 cos^2(k pi/2N) (tan^2(k pi/2N) - omega^2 dt^2 / 4).
std::vector<double> eigenvalues_tangent_form(const OscillatorConfig& config, const Discretization& disc);

struct EigenvectorView {
    std::size_t index;
    std::vector<double> entries;  ///< sqrt(2/N) sin(l k pi / N), l = 1..N-1
};

/// Throws InvalidArgument unless 1 <= k <= N-1.
EigenvectorView eigenvector(const Discretization& disc, std::size_t k);

/// x_0(N) = (2N/pi) atan(omega T / 2N), the real zero of the eigenvalue
/// curve. Empty for omega = 0, where every eigenvalue is positive.
std::optional<double> zero_crossing(const OscillatorConfig& config, const Discretization& disc);

/// Fills every Spectrum field without judging consistency.
Spectrum analyze(const OscillatorConfig& config, const Discretization& disc,
                 double caustic_tol = kCausticTolerance);

/// Like analyze, but throws StepsTooSmall when the finite-N sign count does
/// not match L yet (small N close to a caustic).
Spectrum classify(const OscillatorConfig& config, const Discretization& disc,
                  double caustic_tol = kCausticTolerance);

/// Smallest N >= 2 whose sign count equals the asymptotic L. x_0(N) is
/// increasing, so this is found by doubling and bisection. Throws
/// NumericalFailure when no N below 2^40 qualifies.
std::size_t minimal_stable_steps(const OscillatorConfig& config,
                                 double caustic_tol = kCausticTolerance);

/// Count of eigenvalues strictly below x, by the Sturm sequence of the
/// shifted LDL^T factorization.
std::size_t sturm_count(const DiscreteAction& action, double x);

/// Eigenvalues of the tridiagonal fluctuation matrix by Sturm bisection,
/// ascending. Independent of the closed form.
std::vector<double> eigenvalues_numeric(const DiscreteAction& action);

struct LogAbsProduct {
    double log_abs = 0.0;   ///< sum_k log |lambda_k|
    int negative_count = 0; ///< the product's sign is (-1)^negative_count
};

/// Throws NumericalFailure if some |lambda_k| < 1e-300.
LogAbsProduct abs_eigenvalue_product(const OscillatorConfig& config, const Discretization& disc);

/// log of (N / omega T) |(sigma^2 - conj(sigma)^2) / 2i|, the closed form of
/// the same product (N for the free particle).
double log_abs_product_closed_form(const OscillatorConfig& config, const Discretization& disc);

}  // namespace hopath
