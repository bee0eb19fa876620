#include "hopath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/numeric.hpp"
#include "hopath/errors.hpp"
#include "hopath/lattice_action.hpp"
#include "hopath/parallel.hpp"

namespace hopath {

using detail::kPi;
using cd = std::complex<double>;

namespace {

// Uniform grid x_p = -half + p h, p = 0..count-1.
struct UniformGrid {
    double start;
    double spacing;
    std::size_t count;

    double at(std::size_t p) const { return start + static_cast<double>(p) * spacing; }
};

UniformGrid symmetric_grid(double half_width, double max_spacing) {
    const auto intervals = static_cast<std::size_t>(std::ceil(2.0 * half_width / max_spacing));
    const std::size_t count = std::max<std::size_t>(intervals, 2) + 1;
    return {-half_width, 2.0 * half_width / static_cast<double>(count - 1), count};
}

// out_p = sum_q exp(i coef x_p y_q) in_q, with the phase advanced by a
// phasor recurrence and re-anchored every 256 terms.
void chirp_apply(const UniformGrid& xs, const UniformGrid& ys, double coef, const std::vector<cd>& in,
                 std::vector<cd>& out) {
    out.assign(xs.count, cd{});
    parallel_for(
        xs.count,
        [&](std::size_t p) {
            const double x = xs.at(p);
            const double step_phase = coef * x * ys.spacing;
            const cd step = std::polar(1.0, step_phase);
            cd acc{};
            cd phasor;
            for (std::size_t q = 0; q < ys.count; ++q) {
                if (q % 256 == 0) phasor = std::polar(1.0, coef * x * ys.at(q));
                acc += phasor * in[q];
                phasor *= step;
            }
            out[p] = acc;
        },
        64);
}

// Polynomial through (eps_i, values_i), evaluated at eps = 0 (Neville).
cd extrapolate_to_zero(std::span<const double> eps, std::span<const cd> values) {
    std::vector<cd> p(values.begin(), values.end());
    const std::size_t n = p.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i) {
            const double ei = eps[i];
            const double ej = eps[i + level];
            p[i] = (-ej * p[i] + ei * p[i + 1]) / (ei - ej);
        }
    return p[0];
}

// 1 / ||A^{-1}||_F <= min |lambda(A)| for the tridiagonal form with
// diagonal d and off-diagonal e, by dense Gauss-Jordan.
double smallest_abs_eigenvalue_bound(double d, double e, std::size_t n) {
    std::vector<double> a(n * 2 * n, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * 2 * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        at(i, i) = d;
        if (i + 1 < n) at(i, i + 1) = at(i + 1, i) = e;
        at(i, n + i) = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(at(r, col)) > std::fabs(at(pivot, col))) pivot = r;
        if (at(pivot, col) == 0.0) return 0.0;
        for (std::size_t j = 0; j < 2 * n; ++j) std::swap(at(col, j), at(pivot, j));
        const double inv = 1.0 / at(col, col);
        for (std::size_t j = 0; j < 2 * n; ++j) at(col, j) *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || at(r, col) == 0.0) continue;
            const double f = at(r, col);
            for (std::size_t j = 0; j < 2 * n; ++j) at(r, j) -= f * at(col, j);
        }
    }
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) frob += at(i, n + j) * at(i, n + j);
    return 1.0 / std::sqrt(frob);
}

}  // namespace

void QuadratureSpec::validate() const {
    if (damping_epsilons.size() < 3) throw InvalidArgument("need at least 3 damping epsilons for extrapolation");
    for (std::size_t i = 0; i < damping_epsilons.size(); ++i) {
        if (!(damping_epsilons[i] > 0.0)) throw InvalidArgument("damping epsilons must be positive");
        if (i > 0 && !(damping_epsilons[i] < damping_epsilons[i - 1]))
            throw InvalidArgument("damping epsilons must be strictly decreasing");
    }
    if (!(box_halfwidth > 0.0)) throw InvalidArgument("box half-width must be positive");
    if (points_per_dim < 64) throw InvalidArgument("points_per_dim must be at least 64");
}

QuadratureSpec QuadratureSpec::automatic(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const double dt = disc.delta_t();
    const double curvature = config.mass / (2.0 * config.hbar * dt);
    const double s = std::sin(kPi / (2.0 * static_cast<double>(disc.steps())));
    const double free_lambda_min = 4.0 * s * s;
    const double q = 0.25 * std::pow(config.omega * dt, 2);
    const double lambda_min = std::min(
        free_lambda_min, smallest_abs_eigenvalue_bound(2.0 * (1.0 - q), -(1.0 + q), disc.interior()));
    if (!(lambda_min > 0.0)) throw CausticProximity("lattice action is singular: the Fresnel integral diverges");

    QuadratureSpec spec;
    double eps = 0.25 * curvature * lambda_min;
    for (int j = 0; j < 7; ++j, eps *= 0.6) spec.damping_epsilons.push_back(eps);
    const double eps_min = spec.damping_epsilons.back();
    spec.box_halfwidth = std::sqrt(25.0 / eps_min);

    // Phase gradient of (m / 2 hbar dt)(x^T A x + 2 b^T x) on the box.
    const double bound = 2.0 * std::fabs(1.0 - q) + 2.0 * (1.0 + q);
    const double edge = std::max(std::fabs(config.x_initial), std::fabs(config.x_final));
    const double gradient = 2.0 * curvature * (bound * spec.box_halfwidth + (1.0 + q) * edge);
    const double spacing = 2.0 * kPi / gradient;
    spec.points_per_dim = std::max<std::size_t>(
        64, static_cast<std::size_t>(std::ceil(2.0 * spec.box_halfwidth / spacing)) + 1);
    return spec;
}

FresnelResult brute_force_fresnel(const OscillatorConfig& config, const Discretization& disc,
                                  std::optional<QuadratureSpec> spec_in) {
    config.validate();
    if (disc.steps() < 2 || disc.steps() > 4) throw InvalidArgument("brute-force Fresnel supports N = 2, 3, 4 only");
    const QuadratureSpec spec = spec_in ? *spec_in : QuadratureSpec::automatic(config, disc);
    spec.validate();

    const double dt = disc.delta_t();
    const double kappa = config.mass / (2.0 * config.hbar * dt);
    const double wdt = config.omega * dt;
    const double alpha = 1.0 - 0.25 * wdt * wdt;
    const double beta = 1.0 + 0.25 * wdt * wdt;
    const double xi = config.x_initial;
    const double xf = config.x_final;
    const std::size_t interior = disc.interior();

    // The grid spacing is fixed by the smallest epsilon; larger epsilons use a
    // correspondingly smaller box on the same spacing.
    const double spacing = 2.0 * spec.box_halfwidth / static_cast<double>(spec.points_per_dim - 1);
    const double n = static_cast<double>(disc.steps());
    const cd prefactor = std::polar(std::pow(config.mass / (2.0 * kPi * config.hbar * dt), 0.5 * n), -0.25 * kPi * n);

    // One link factor exp(i kappa (alpha (x^2 + y^2) - 2 beta x y)).
    auto link = [&](double x, double y) { return std::polar(1.0, kappa * (alpha * (x * x + y * y) - 2.0 * beta * x * y)); };

    FresnelResult result;
    result.spec = spec;
    for (double eps : spec.damping_epsilons) {
        const double half = std::min(spec.box_halfwidth, std::sqrt(25.0 / eps));
        const auto count = static_cast<std::size_t>(std::floor(2.0 * half / spacing)) + 1;
        const UniformGrid grid{-0.5 * spacing * static_cast<double>(count - 1), spacing, count};

        // g(x_1) = link(x_I, x_1) damping(x_1)
        std::vector<cd> g(count);
        for (std::size_t p = 0; p < count; ++p) {
            const double x = grid.at(p);
            g[p] = link(xi, x) * std::exp(-eps * x * x);
        }
        std::vector<cd> next;
        for (std::size_t node = 1; node < interior; ++node) {
            // g'(y) = damping(y) e^{i kappa alpha y^2} h sum_x e^{-2 i kappa beta x y} e^{i kappa alpha x^2} g(x)
            for (std::size_t p = 0; p < count; ++p) {
                const double x = grid.at(p);
                g[p] *= std::polar(spacing, kappa * alpha * x * x);
            }
            chirp_apply(grid, grid, -2.0 * kappa * beta, g, next);
            for (std::size_t p = 0; p < count; ++p) {
                const double y = grid.at(p);
                next[p] *= std::polar(std::exp(-eps * y * y), kappa * alpha * y * y);
            }
            g.swap(next);
        }
        cd total{};
        for (std::size_t p = 0; p < count; ++p) {
            const double w = (p == 0 || p + 1 == count) ? 0.5 : 1.0;
            total += w * link(grid.at(p), xf) * g[p];
        }
        result.regularized.push_back(prefactor * spacing * total);
    }

    // The damping acts on the classical path as roughly exp(-eps |x_c|^2), so
    // log I(eps) is far closer to a low-order polynomial than I(eps) itself.
    const auto& eps = spec.damping_epsilons;
    std::vector<cd> logs(result.regularized.size());
    double previous_arg = 0.0;
    for (std::size_t j = 0; j < logs.size(); ++j) {
        double arg = std::arg(result.regularized[j]);
        if (j > 0) arg += 2.0 * kPi * std::round((previous_arg - arg) / (2.0 * kPi));
        previous_arg = arg;
        logs[j] = {std::log(std::abs(result.regularized[j])), arg};
    }
    result.value = std::exp(extrapolate_to_zero(eps, logs));
    result.lower_order_value = std::exp(extrapolate_to_zero(std::span(eps).subspan(1), std::span(logs).subspan(1)));
    result.extrapolation_residual = std::abs(result.value - result.lower_order_value);
    if (result.extrapolation_residual > 1e-4 * std::abs(result.value)) {
        std::string msg = "epsilon extrapolation unstable: residual " + std::to_string(result.extrapolation_residual) +
                          " vs |value| " + std::to_string(std::abs(result.value)) + "; regularized values:";
        for (const cd& v : result.regularized) msg += " (" + std::to_string(v.real()) + "," + std::to_string(v.imag()) + ")";
        throw NumericalFailure(msg);
    }
    return result;
}

RegularKernel assembled_kernel(const OscillatorConfig& config, const Discretization& disc) {
    const DiscreteAction action = build_action(config, disc);
    DenseMatrix a = action.dense();
    const std::size_t n = a.size();

    // Symmetric Gaussian elimination; the pivots are the D of A = L D L^T.
    std::vector<double> rhs(action.vector_b);
    for (double& r : rhs) r = -r;
    std::vector<double> pivots(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double piv = a(k, k);
        if (std::fabs(piv) < 1e-14) throw NumericalFailure("zero pivot in assembled quadratic form");
        pivots[k] = piv;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / piv;
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<double> xc(n);
    for (std::size_t k = n; k-- > 0;) {
        double acc = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= a(k, j) * xc[j];
        xc[k] = acc / a(k, k);
    }

    int negatives = 0;
    double log_abs_det = 0.0;
    for (double p : pivots) {
        if (p < 0.0) ++negatives;
        log_abs_det += std::log(std::fabs(p));
    }
    const int positives = static_cast<int>(n) - negatives;
    const double dt = disc.delta_t();
    const double s_c = quadratic_form_value(action, xc, config.mass, dt);

    // (m / 2 pi i hbar dt)^{N/2} prod_k sqrt(2 pi hbar dt / m |lambda_k|) e^{+-i pi/4}
    RegularKernel k;
    k.magnitude = std::exp(0.5 * std::log(config.mass / (2.0 * kPi * config.hbar * dt)) - 0.5 * log_abs_det);
    k.maslov_index = negatives;
    k.maslov_phase = detail::maslov_angle(negatives);
    k.phase = -0.25 * kPi * static_cast<double>(disc.steps()) + 0.25 * kPi * (positives - negatives) + s_c / config.hbar;
    k.amplitude = std::polar(k.magnitude, k.phase);
    return k;
}

EvolvedWavefunction step_composition_evolve(const OscillatorConfig& config, const GaussianPacket& packet,
                                            std::size_t steps, std::optional<GridSpec> grid_in) {
    config.validate();
    if (steps < 1) throw InvalidArgument("step composition needs at least one step");
    const double dt = config.time / static_cast<double>(steps);
    const double wdt = config.omega * dt;
    if (wdt >= kPi) throw InvalidArgument("each step must stay within half a period (omega dt < pi)");

    const double m = config.mass;
    const double hbar = config.hbar;
    const double s_eff = config.omega > 0.0 ? std::sin(wdt) / config.omega : dt;
    const double cos_step = std::cos(wdt);
    const double w = packet.width();
    const double k = packet.momentum();

    double x_max;
    if (config.omega > 0.0) {
        const double amplitude = std::hypot(packet.center(), hbar * k / (m * config.omega));
        const double width_max = std::max(w, hbar / (m * config.omega * w));
        x_max = amplitude + 10.0 * width_max;
    } else {
        const double drift = packet.center() + hbar * k * config.time / m;
        const double width_t = w * std::hypot(1.0, hbar * config.time / (m * w * w));
        x_max = std::max(std::fabs(packet.center()), std::fabs(drift)) + 10.0 * width_t;
    }
    const double max_spacing = kPi * hbar * s_eff / (m * x_max);

    UniformGrid grid;
    if (grid_in) {
        if (!(grid_in->half_width > 0.0) || grid_in->points < 3) throw InvalidArgument("grid needs positive extent and >= 3 points");
        grid = {-grid_in->half_width, 2.0 * grid_in->half_width / static_cast<double>(grid_in->points - 1), grid_in->points};
        if (grid.spacing > max_spacing)
            throw InvalidArgument("grid spacing " + std::to_string(grid.spacing) + " exceeds the resolution bound " +
                                  std::to_string(max_spacing));
    } else {
        double spacing = 0.5 * max_spacing;
        spacing = std::min(spacing, 0.25 * w);
        if (k != 0.0) spacing = std::min(spacing, 0.25 * kPi / std::fabs(k));
        grid = symmetric_grid(x_max, spacing);
    }

    EvolvedWavefunction out;
    out.grid.resize(grid.count);
    out.values.resize(grid.count);
    for (std::size_t p = 0; p < grid.count; ++p) {
        out.grid[p] = grid.at(p);
        out.values[p] = packet(out.grid[p]);
    }
    out.spacing = grid.spacing;
    out.half_width = -grid.start;
    out.steps = steps;
    out.step_time = dt;
    out.max_spacing = max_spacing;

    // K(x, y) = sqrt(m / 2 pi i hbar s) exp(i gamma (cos(omega dt)(x^2 + y^2) - 2 x y)), gamma = m / 2 hbar s
    const double gamma = m / (2.0 * hbar * s_eff);
    const cd prefactor = std::polar(std::sqrt(m / (2.0 * kPi * hbar * s_eff)), -0.25 * kPi);
    std::vector<cd> chirp(grid.count);
    for (std::size_t p = 0; p < grid.count; ++p) {
        const double x = grid.at(p);
        chirp[p] = std::polar(1.0, gamma * cos_step * x * x);
    }
    std::vector<cd> work(grid.count);
    std::vector<cd> next;
    for (std::size_t step = 0; step < steps; ++step) {
        for (std::size_t p = 0; p < grid.count; ++p) {
            const double wt = (p == 0 || p + 1 == grid.count) ? 0.5 : 1.0;
            work[p] = wt * grid.spacing * chirp[p] * out.values[p];
        }
        chirp_apply(grid, grid, -2.0 * gamma, work, next);
        for (std::size_t p = 0; p < grid.count; ++p) out.values[p] = prefactor * chirp[p] * next[p];
    }
    return out;
}

double l2_deviation(const EvolvedWavefunction& psi, const std::function<std::complex<double>(double)>& reference) {
    double sum = 0.0;
    const std::size_t n = psi.grid.size();
    for (std::size_t p = 0; p < n; ++p) {
        const double wt = (p == 0 || p + 1 == n) ? 0.5 : 1.0;
        sum += wt * std::norm(psi.values[p] - reference(psi.grid[p]));
    }
    return std::sqrt(sum * psi.spacing);
}

CausticPhaseCheck measure_caustic_phase(const OscillatorConfig& config, const GaussianPacket& packet, int m_index,
                                        std::size_t steps) {
    config.validate();
    if (config.omega <= 0.0 || m_index < 1) throw InvalidArgument("caustic phase check needs omega > 0 and M >= 1");
    const OscillatorConfig at = config.with_time(m_index * kPi / config.omega);
    const EvolvedWavefunction psi = step_composition_evolve(at, packet, steps);

    CausticPhaseCheck check;
    check.m_index = m_index;
    check.parity = detail::parity_sign(m_index);
    check.expected_phase = detail::maslov_angle(m_index);
    const cd shift = std::polar(1.0, check.expected_phase);
    const double parity = check.parity;
    cd overlap{};
    for (std::size_t p = 0; p < psi.grid.size(); ++p) overlap += std::conj(packet(parity * psi.grid[p])) * psi.values[p];
    check.measured_phase = std::arg(overlap);
    check.l2_deviation = l2_deviation(psi, [&](double x) { return shift * packet(parity * x); });
    return check;
}

std::vector<double> hermite_functions(std::size_t n_max, double xi) {
    std::vector<double> h(n_max + 1);
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
    if (n_max >= 1) h[1] = std::sqrt(2.0) * xi * h[0];
    for (std::size_t n = 1; n < n_max; ++n) {
        const double nn = static_cast<double>(n);
        h[n + 1] = xi * std::sqrt(2.0 / (nn + 1.0)) * h[n] - std::sqrt(nn / (nn + 1.0)) * h[n - 1];
    }
    return h;
}

ExpansionResult eigenfunction_expansion_kernel(const OscillatorConfig& config, std::size_t n_max,
                                               const GaussianPacket& f, double x_final, double tail_tol) {
    config.validate();
    if (config.omega <= 0.0) throw InvalidArgument("eigenfunction expansion needs omega > 0");
    if (n_max < 1) throw InvalidArgument("n_max must be at least 1");

    const double ell = std::sqrt(config.hbar / (config.mass * config.omega));
    const double w = f.width();
    const double max_freq = std::sqrt(2.0 * static_cast<double>(n_max) + 1.0) / ell + std::fabs(f.momentum()) + 1.0 / w;
    const double spacing = std::min(0.125 * w, 0.5 * kPi / max_freq);
    const double lo = f.center() - 12.0 * w;
    const auto count = static_cast<std::size_t>(std::ceil(24.0 * w / spacing)) + 1;
    const double h = 24.0 * w / static_cast<double>(count - 1);

    // <phi_n, f> by the trapezoid rule; both factors are entire and decay.
    std::vector<cd> coeff(n_max + 1, cd{});
    const double inv_sqrt_ell = 1.0 / std::sqrt(ell);
    for (std::size_t p = 0; p < count; ++p) {
        const double y = lo + static_cast<double>(p) * h;
        const cd fy = f(y) * h * ((p == 0 || p + 1 == count) ? 0.5 : 1.0);
        const auto herm = hermite_functions(n_max, y / ell);
        for (std::size_t n = 0; n <= n_max; ++n) coeff[n] += herm[n] * inv_sqrt_ell * fy;
    }

    const auto at_final = hermite_functions(n_max, x_final / ell);
    const double wt = config.omega_time();
    ExpansionResult r{};
    r.n_max = n_max;
    for (std::size_t n = 0; n <= n_max; ++n)
        r.value += at_final[n] * inv_sqrt_ell * std::polar(1.0, -(static_cast<double>(n) + 0.5) * wt) * coeff[n];
    // |h_n| <= pi^{-1/4}, so the largest trailing coefficient bounds the tail terms.
    for (std::size_t n = (n_max >= 8 ? n_max - 7 : 0); n <= n_max; ++n)
        r.tail_estimate = std::max(r.tail_estimate, std::abs(coeff[n]) * inv_sqrt_ell * std::pow(kPi, -0.25));
    if (r.tail_estimate > tail_tol)
        throw NumericalFailure("eigenfunction expansion not converged at n_max = " + std::to_string(n_max) +
                               ": tail estimate " + std::to_string(r.tail_estimate));
    return r;
}

}  // namespace hopath
