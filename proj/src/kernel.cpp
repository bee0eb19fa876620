#include "hopath/kernel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "detail/numeric.hpp"
#include "hopath/errors.hpp"
#include "hopath/parallel.hpp"

namespace hopath {

using detail::kPi;

namespace {

struct LatticeAngles {
    double a;          // omega T / 2N = omega dt / 2
    double two_theta;  // 2 arg sigma(N) = turns pi + offset
    int turns;
    double offset;
    double log_sigma_sq;

    double sin_two_theta() const { return detail::parity_sign(turns) * std::sin(offset); }
    double sinc_two_theta() const {
        return turns == 0 ? detail::sinc(two_theta) : sin_two_theta() / two_theta;
    }
    // 1 - |cos 2 theta| = 2 sin^2(offset / 2)
    double defect() const {
        const double h = std::sin(0.5 * offset);
        return 2.0 * h * h;
    }
};

LatticeAngles angles(const OscillatorConfig& config, std::size_t n) {
    const double nn = static_cast<double>(n);
    const double a = config.omega_time() / (2.0 * nn);
    LatticeAngles g;
    g.a = a;
    g.two_theta = 2.0 * nn * std::atan(a);
    g.turns = static_cast<int>(std::lround(g.two_theta / kPi));
    // 2 N atan(a) - M pi = (omega T - M pi) - 2N (a - atan a)
    g.offset = detail::minus_multiple_of_pi(config.omega, config.time, g.turns) - 2.0 * nn * detail::a_minus_atan(a);
    g.log_sigma_sq = nn * std::log1p(a * a);
    return g;
}

// |Im sigma^2| / (omega T), finite at omega = 0 where it tends to 1.
double scaled_im_sigma_sq(const LatticeAngles& g) {
    return std::exp(g.log_sigma_sq) * g.sinc_two_theta() * detail::atanc(g.a);
}

// D_{N-2} and D_{N-1} sharing one log scale, from the three-term recursion.
struct RecursionTail {
    double before_last;  // D_{N-2} / e^{scale}
    double last;         // D_{N-1} / e^{scale}
    double log_scale;
};

// The recursion D_{n+1} = 2 alpha D_n - beta^2 D_{n-1} with alpha = 1 - q,
// beta = 1 + q, run on the differences E_n = D_n - D_{n-1}:
//   E_{n+1} = E_n - q (2 D_n + (2 + q) D_{n-1}),  D_{n+1} = D_n + E_{n+1}.
template <typename Visit>
RecursionTail run_recursion(double q, std::size_t interior, Visit&& visit) {
    double prev = 1.0;  // D_0
    double cur = 2.0 - 2.0 * q;
    double diff = 1.0 - 2.0 * q;
    double log_scale = 0.0;
    visit(0, prev, log_scale);
    if (interior >= 1) visit(1, cur, log_scale);
    for (std::size_t n = 1; n < interior; ++n) {
        diff -= q * (2.0 * cur + (2.0 + q) * prev);
        prev = cur;
        cur += diff;
        const double mag = std::max(std::fabs(cur), std::fabs(prev));
        if (mag > 1e150 || (mag < 1e-150 && mag > 0.0)) {
            prev /= mag;
            cur /= mag;
            diff /= mag;
            log_scale += std::log(mag);
        }
        visit(n + 1, cur, log_scale);
    }
    return {prev, cur, log_scale};
}

SignedLog to_signed_log(double scaled, double log_scale) {
    SignedLog s = SignedLog::from(scaled);
    if (!s.is_zero()) s.log_abs += log_scale;
    return s;
}

}  // namespace

SigmaValue sigma(const OscillatorConfig& config, std::size_t n) {
    config.validate();
    if (n < 1) throw InvalidArgument("sigma needs n >= 1");
    const double nn = static_cast<double>(n);
    const double a = config.omega_time() / (2.0 * nn);
    SigmaValue s;
    s.n = n;
    s.arg = nn * std::atan(a);
    s.log_modulus = 0.5 * nn * std::log1p(a * a);
    s.value = std::polar(std::exp(s.log_modulus), s.arg);
    return s;
}

DeterminantSequence determinant_sequence(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const double wdt = config.omega * disc.delta_t();
    const double q = 0.25 * wdt * wdt;
    DeterminantSequence seq;
    seq.values.reserve(disc.steps());
    run_recursion(q, disc.interior(),
                  [&](std::size_t, double scaled, double log_scale) {
                      seq.values.push_back(to_signed_log(scaled, log_scale));
                  });
    return seq;
}

SignedLog determinant_closed_form(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const LatticeAngles g = angles(config, disc.steps());
    const double n = static_cast<double>(disc.steps());
    if (config.omega == 0.0) return SignedLog::from(n);
    // (N / omega T) Im sigma^2 = N |sigma|^2 sinc(2 theta) atan(a)/a
    const double core = g.sinc_two_theta() * detail::atanc(g.a);
    SignedLog d = SignedLog::from(core);
    if (!d.is_zero()) d.log_abs += std::log(n) + g.log_sigma_sq;
    return d;
}

PhasedAmplitude fluctuation_factor(const OscillatorConfig& config, const Discretization& disc,
                                   const Spectrum& spectrum) {
    config.validate();
    const LatticeAngles g = angles(config, disc.steps());
    if (config.omega > 0.0 && std::fabs(g.sinc_two_theta()) < 1e-14)
        throw CausticProximity("fluctuation determinant vanishes numerically (|sigma^2 - conj(sigma)^2| ~ 0)");
    const double scaled = std::fabs(scaled_im_sigma_sq(g));
    PhasedAmplitude q;
    q.magnitude = std::sqrt(config.mass / (2.0 * kPi * config.hbar * config.time * scaled));
    q.maslov_index = spectrum.negative_count;
    q.maslov_phase = detail::maslov_angle(spectrum.negative_count);
    q.phase = -0.25 * kPi + q.maslov_phase;
    return q;
}

PhasedAmplitude fluctuation_factor_from_eigenvalues(const OscillatorConfig& config, const Discretization& disc) {
    const LogAbsProduct prod = abs_eigenvalue_product(config, disc);
    PhasedAmplitude q;
    const double log_pref = std::log(config.mass / (2.0 * kPi * config.hbar * disc.delta_t()));
    q.magnitude = std::exp(0.5 * (log_pref - prod.log_abs));
    q.maslov_index = prod.negative_count;
    q.maslov_phase = detail::maslov_angle(prod.negative_count);
    q.phase = -0.25 * kPi + q.maslov_phase;
    return q;
}

double classical_action(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const LatticeAngles g = angles(config, disc.steps());
    const double xi = config.x_initial;
    const double xf = config.x_final;
    // m omega / (2 sin 2 theta) = m / (2 T sinc(2 theta) atanc(a))
    const double denom = g.sinc_two_theta() * detail::atanc(g.a);
    if (denom == 0.0) throw CausticProximity("classical action diverges: sin 2 arg sigma = 0");
    PropagatorForm form;
    form.coupling = config.mass / (2.0 * config.time * denom);
    form.parity = detail::parity_sign(g.turns);
    form.defect = g.defect();
    return form.action(xi, xf);
}

double classical_action_recursion(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const double dt = disc.delta_t();
    const double wdt = config.omega * dt;
    const double q = 0.25 * wdt * wdt;
    const double alpha = 1.0 - q;
    const double beta = 1.0 + q;
    const RecursionTail tail = run_recursion(q, disc.interior(), [](std::size_t, double, double) {});
    if (tail.last == 0.0) throw CausticProximity("D_{N-1} = 0: lattice sits on a caustic");

    const double ratio = tail.before_last / tail.last;  // D_{N-2} / D_{N-1}
    const double log_beta_n = static_cast<double>(disc.steps()) * std::log1p(q);
    const double beta_n_over_d =
        (tail.last < 0.0 ? -1.0 : 1.0) * std::exp(log_beta_n - std::log(std::fabs(tail.last)) - tail.log_scale);

    const double xi = config.x_initial;
    const double xf = config.x_final;
    return config.mass / (2.0 * dt) *
           ((alpha - beta * beta * ratio) * (xi * xi + xf * xf) - beta_n_over_d * 2.0 * xi * xf);
}

RegularKernel PropagatorForm::operator()(double x_initial, double x_final) const {
    RegularKernel k;
    k.magnitude = prefactor.magnitude;
    k.phase = prefactor.phase + action(x_initial, x_final) / hbar;
    k.maslov_phase = prefactor.maslov_phase;
    k.maslov_index = prefactor.maslov_index;
    k.amplitude = std::polar(k.magnitude, k.phase);
    return k;
}

PropagatorForm lattice_propagator(const OscillatorConfig& config, const Discretization& disc) {
    const Spectrum spectrum = analyze(config, disc);
    PropagatorForm form;
    form.prefactor = fluctuation_factor(config, disc, spectrum);
    const LatticeAngles g = angles(config, disc.steps());
    // m omega / (2 sin 2 theta) = m / (2 T sinc(2 theta) atanc(a))
    form.coupling = config.mass / (2.0 * config.time * g.sinc_two_theta() * detail::atanc(g.a));
    form.diagonal = std::cos(g.two_theta);
    form.parity = detail::parity_sign(g.turns);
    form.defect = g.defect();
    form.hbar = config.hbar;
    return form;
}

RegularKernel lattice_kernel(const OscillatorConfig& config, const Discretization& disc) {
    return lattice_propagator(config, disc)(config.x_initial, config.x_final);
}

PropagatorForm closed_form_propagator(const OscillatorConfig& config, double caustic_tol) {
    config.validate();
    PropagatorForm form;
    form.hbar = config.hbar;
    if (config.omega == 0.0) {
        form.prefactor.magnitude = std::sqrt(config.mass / (2.0 * kPi * config.hbar * config.time));
        form.prefactor.phase = -0.25 * kPi;
        form.coupling = config.mass / (2.0 * config.time);
        form.diagonal = 1.0;
        return form;
    }
    const TimeClass tc = classify_time(config, caustic_tol);
    if (tc.at_caustic) throw CausticProximity("closed-form kernel is a delta distribution at this time");
    const double wt = config.omega_time();
    const int turns = static_cast<int>(std::lround(wt / kPi));
    const double offset = detail::minus_multiple_of_pi(config.omega, config.time, turns);
    const double s = detail::parity_sign(turns) * std::sin(offset);
    const double h = std::sin(0.5 * offset);
    form.parity = detail::parity_sign(turns);
    form.defect = 2.0 * h * h;
    form.prefactor.magnitude = std::sqrt(config.mass * config.omega / (2.0 * kPi * config.hbar * std::fabs(s)));
    form.prefactor.maslov_index = tc.m_index;
    form.prefactor.maslov_phase = detail::maslov_angle(tc.m_index);
    form.prefactor.phase = -0.25 * kPi + form.prefactor.maslov_phase;
    form.coupling = config.mass * config.omega / (2.0 * s);
    form.diagonal = std::cos(wt);
    return form;
}

bool near_caustic(const OscillatorConfig& config, double caustic_tol) {
    if (config.omega == 0.0) return false;
    if (classify_time(config, caustic_tol).at_caustic) return true;
    return std::lround(config.omega_time() / kPi) >= 1 && std::fabs(std::sin(config.omega_time())) < 1e-6;
}

std::optional<CausticDelta> routed_caustic(const OscillatorConfig& config, double caustic_tol) {
    if (!near_caustic(config, caustic_tol)) return std::nullopt;
    const int m = static_cast<int>(std::lround(config.omega_time() / kPi));
    return CausticDelta{m, detail::maslov_angle(m), detail::parity_sign(m)};
}

KernelValue discrete_kernel(const OscillatorConfig& config, const Discretization& disc, double caustic_tol) {
    config.validate();
    if (near_caustic(config, caustic_tol))
        throw CausticProximity("omega T = " + std::to_string(config.omega_time()) +
                               " is at a caustic; evaluate the smeared kernel instead");
    return lattice_kernel(config, disc);
}

KernelValue closed_form_kernel(const OscillatorConfig& config, double caustic_tol) {
    config.validate();
    const TimeClass tc = classify_time(config, caustic_tol);
    if (tc.at_caustic) return CausticDelta{tc.m_index, detail::maslov_angle(tc.m_index), detail::parity_sign(tc.m_index)};
    return closed_form_propagator(config, caustic_tol)(config.x_initial, config.x_final);
}

std::complex<double> amplitude_of(const KernelValue& k) {
    if (const auto* r = std::get_if<RegularKernel>(&k)) return r->amplitude;
    throw CausticProximity("caustic kernel is a distribution and has no pointwise amplitude");
}

ConvergenceStudy convergence_study(const OscillatorConfig& config, std::span<const std::size_t> ladder) {
    config.validate();
    if (near_caustic(config))
        throw CausticProximity("convergence study needs a non-caustic time; use the smeared delta-limit study");
    const std::complex<double> reference = amplitude_of(closed_form_kernel(config));

    ConvergenceStudy study;
    study.rows.resize(ladder.size());
    parallel_for(ladder.size(), [&](std::size_t i) {
        const Discretization disc(config, ladder[i]);
        const std::complex<double> value = lattice_kernel(config, disc).amplitude;
        const double err = std::abs(value - reference);
        study.rows[i] = {ladder[i], err, err / std::abs(reference), std::numeric_limits<double>::quiet_NaN()};
    });

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
        auto& row = study.rows[i];
        if (i > 0 && row.abs_error > 0.0 && study.rows[i - 1].abs_error > 0.0)
            row.local_order = std::log(study.rows[i - 1].abs_error / row.abs_error) /
                              std::log(static_cast<double>(row.steps) / static_cast<double>(study.rows[i - 1].steps));
        if (row.abs_error > 0.0) {
            const double x = std::log(static_cast<double>(row.steps));
            const double y = std::log(row.abs_error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++used;
        }
    }
    study.fitted_slope = std::numeric_limits<double>::quiet_NaN();
    if (used >= 2) {
        const double n = static_cast<double>(used);
        const double den = n * sxx - sx * sx;
        if (den != 0.0) study.fitted_slope = (n * sxy - sx * sy) / den;
    }
    return study;
}

}  // namespace hopath
