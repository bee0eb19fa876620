#include "hopath/caustic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "detail/numeric.hpp"
#include "hopath/errors.hpp"
#include "hopath/kernel.hpp"

namespace hopath {

using detail::kPi;
using cd = std::complex<double>;

namespace {

// 1 - e^{2 i eps} = 2 sin(eps) e^{-i (pi/2 - eps)} and 1 + e^{2 i eps} = 2 cos(eps) e^{i eps}.
cd one_minus_e2i(double eps) { return std::polar(2.0 * std::sin(eps), eps - 0.5 * kPi); }
cd one_plus_e2i(double eps) { return std::polar(2.0 * std::cos(eps), eps); }

double uv_scale(const OscillatorConfig& config) { return std::sqrt(config.mass * config.omega / (2.0 * config.hbar)); }

// log of sqrt(m omega / pi i hbar) e^{-i (M-1) pi/2} / (|sigma| sqrt|1+z| sqrt|1-z|).
cd log_caustic_prefactor(const OscillatorConfig& config, const CausticState& st) {
    const double log_mag = 0.5 * std::log(config.mass * config.omega / (kPi * config.hbar)) -
                           0.5 * st.log_sigma_modulus_sq - 0.5 * std::log(std::abs(st.one_plus_z)) -
                           0.5 * std::log(std::abs(st.one_minus_z));
    const double phase = -0.25 * kPi - 0.5 * kPi * (st.m_index - 1);
    return {log_mag, phase};
}

}  // namespace

CausticState caustic_state(const OscillatorConfig& config, std::size_t steps, double caustic_tol) {
    const TimeClass tc = classify_time(config, caustic_tol);
    if (!tc.at_caustic)
        throw CausticProximity("omega T / pi = " + std::to_string(config.omega_time() / kPi) + " is not a caustic");
    if (steps < 2) throw InvalidArgument("caustic state needs N >= 2");

    CausticState st;
    st.m_index = tc.m_index;
    st.steps = steps;
    const double n = static_cast<double>(steps);
    // Snap to omega T = M pi exactly: a = M pi / 2N and eps = N (a - atan a).
    const double a = tc.m_index * kPi / (2.0 * n);
    st.epsilon = n * detail::a_minus_atan(a);
    st.log_sigma_modulus_sq = n * std::log1p(a * a);
    const double sign = detail::parity_sign(tc.m_index);
    st.z = sign * std::polar(1.0, 2.0 * st.epsilon);
    if (tc.m_index % 2 == 0) {
        st.one_minus_z = one_minus_e2i(st.epsilon);
        st.one_plus_z = one_plus_e2i(st.epsilon);
    } else {
        st.one_minus_z = one_plus_e2i(st.epsilon);
        st.one_plus_z = one_minus_e2i(st.epsilon);
    }
    return st;
}

double epsilon_leading_order(int m_index, std::size_t steps) {
    const double h = m_index * kPi / 2.0;
    const double n = static_cast<double>(steps);
    return h * h * h / (3.0 * n * n);
}

UVCoordinates to_uv(const OscillatorConfig& config, double x_initial, double x_final) {
    config.validate();
    if (config.omega == 0.0) throw InvalidArgument("u/v coordinates need omega > 0");
    const double c = uv_scale(config);
    return {c * (x_initial + x_final), c * (x_initial - x_final)};
}

std::pair<double, double> from_uv(const OscillatorConfig& config, UVCoordinates uv) {
    config.validate();
    if (config.omega == 0.0) throw InvalidArgument("u/v coordinates need omega > 0");
    const double c = uv_scale(config);
    return {0.5 * (uv.u + uv.v) / c, 0.5 * (uv.u - uv.v) / c};
}

cd rewrite_kernel_uv(const OscillatorConfig& config, std::size_t steps, double x_initial, double x_final) {
    const CausticState st = caustic_state(config, steps);
    const UVCoordinates uv = to_uv(config, x_initial, x_final);
    const cd exponent = 0.5 * (uv.u * uv.u + uv.v * uv.v) - uv.u * uv.u / st.one_plus_z - uv.v * uv.v / st.one_minus_z;
    return std::exp(log_caustic_prefactor(config, st) + exponent);
}

QuadratureResult contour_rotated_smear(const OscillatorConfig& config, std::size_t steps, const GaussianPacket& f,
                                       double x_final) {
    const CausticState st = caustic_state(config, steps);
    const double c = uv_scale(config);
    const bool even = st.m_index % 2 == 0;
    // Even M: integrate over v, x_I = x_F + v/c. Odd M: over u, x_I = u/c - x_F.
    const cd w = 1.0 / (even ? st.one_minus_z : st.one_plus_z);
    const double rotation = -0.5 * std::arg(w);
    const cd direction = std::polar(1.0, rotation);
    const cd log_pref = log_caustic_prefactor(config, st) - std::log(c);

    auto integrand = [&](double s) -> cd {
        const cd xi = s * direction;
        cd u, v, x_initial;
        if (even) {
            v = xi;
            u = xi + 2.0 * c * x_final;
            x_initial = x_final + xi / c;
        } else {
            u = xi;
            v = xi - 2.0 * c * x_final;
            x_initial = xi / c - x_final;
        }
        const cd exponent = 0.5 * (u * u + v * v) - u * u / st.one_plus_z - v * v / st.one_minus_z;
        return std::exp(log_pref + exponent + f.log_value(x_initial)) * direction;
    };

    const double half_width = 8.0 / std::sqrt(std::abs(w));
    QuadratureResult r = integrate_decaying(integrand, 0.0, half_width, 1e-10);
    if (!r.converged)
        throw NumericalFailure("contour-rotated quadrature did not converge: estimated error " +
                               std::to_string(r.error_estimate) + " after " + std::to_string(r.evaluations) +
                               " evaluations");
    return r;
}

cd delta_limit_reference(const OscillatorConfig& config, const GaussianPacket& f, double x_final, double caustic_tol) {
    const TimeClass tc = classify_time(config, caustic_tol);
    if (!tc.at_caustic) throw CausticProximity("delta-limit reference only exists at caustics");
    return std::polar(1.0, detail::maslov_angle(tc.m_index)) * f(detail::parity_sign(tc.m_index) * x_final);
}

cd smeared_kernel(const OscillatorConfig& config, const GaussianPacket& f, double x_final, const KernelSource& source,
                  double caustic_tol) {
    config.validate();
    const TimeClass tc = classify_time(config, caustic_tol);
    if (tc.at_caustic) {
        if (std::holds_alternative<ClosedKernel>(source)) return delta_limit_reference(config, f, x_final, caustic_tol);
        const OscillatorConfig snapped = config.with_time(tc.m_index * kPi / config.omega);
        return contour_rotated_smear(snapped, std::get<LatticeKernel>(source).steps, f, x_final).value;
    }

    const PropagatorForm form = std::holds_alternative<ClosedKernel>(source)
                                    ? closed_form_propagator(config, caustic_tol)
                                    : lattice_propagator(config, Discretization(config, std::get<LatticeKernel>(source).steps));
    auto integrand = [&](double x_initial) { return form(x_initial, x_final).amplitude * f(x_initial); };
    const QuadratureResult r = integrate_decaying(integrand, f.center(), 8.0 * f.width(), 1e-10);
    if (!r.converged)
        throw NumericalFailure("smeared-kernel quadrature did not converge: estimated error " +
                               std::to_string(r.error_estimate));
    return r.value;
}

DeltaLimitStudy delta_limit_study(const OscillatorConfig& config, const GaussianPacket& f, double x_final, double tol,
                                  std::size_t start_steps, std::size_t max_steps) {
    DeltaLimitStudy study;
    study.reference = delta_limit_reference(config, f, x_final);
    study.converged_steps = 0;
    for (std::size_t n = std::max<std::size_t>(2, start_steps); n <= max_steps; n *= 2) {
        const cd value = contour_rotated_smear(config, n, f, x_final).value;
        const double dev = std::abs(value - study.reference);
        study.rows.push_back({n, value, dev});
        if (dev < tol) {
            if (study.converged_steps != 0) break;  // confirmed at 2 N*
            study.converged_steps = n;
        } else {
            study.converged_steps = 0;
        }
    }
    return study;
}

TestFunction TestFunction::from(const GaussianPacket& g) {
    return {[g](double x) { return g(x); }, g.center() - 12.0 * g.width(), g.center() + 12.0 * g.width()};
}

DeltaCheckReport delta_representation_check(std::span<const double> r_sequence, const TestFunction& f) {
    DeltaCheckReport report;
    report.target = f.eval(0.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (double r : r_sequence) {
        if (!(r > 0.0)) throw InvalidArgument("delta representation needs r > 0");
        const double reach = 10.0 * std::sqrt(r);
        const double lo = std::max(f.lower, -reach);
        const double hi = std::min(f.upper, reach);
        const double norm = 1.0 / std::sqrt(kPi * r);
        auto integrand = [&](double x) { return norm * std::exp(-x * x / r) * f.eval(x); };
        cd value = 0.0;
        if (hi > lo) value = integrate_adaptive(integrand, lo, hi, 1e-13).value;
        const double err = std::abs(value - report.target);
        report.rows.push_back({r, value, err});
        if (err > 0.0) {
            const double x = std::log(r);
            const double y = std::log(err);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++used;
        }
    }
    report.fitted_order = std::numeric_limits<double>::quiet_NaN();
    if (used >= 2) {
        const double n = static_cast<double>(used);
        const double den = n * sxx - sx * sx;
        if (den != 0.0) report.fitted_order = (n * sxy - sx * sy) / den;
    }
    return report;
}

}  // namespace hopath
