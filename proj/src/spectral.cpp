#include "hopath/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "detail/numeric.hpp"
#include "hopath/errors.hpp"

namespace hopath {

using detail::kPi;

TimeClass classify_time(const OscillatorConfig& config, double caustic_tol) {
    config.validate();
    if (config.omega == 0.0) return {};
    const double ratio = config.omega_time() / kPi;
    const double nearest = std::round(ratio);
    if (nearest >= 1.0 && std::fabs(ratio - nearest) < caustic_tol) {
        const int m = static_cast<int>(nearest);
        return {m, m - 1, true};
    }
    const int m = static_cast<int>(std::floor(ratio));
    return {m, m, false};
}

namespace {

// Number of k in 1..N-1 with k < x0, evaluated with the same factored sign
// test as the eigenvalues so that it agrees with a direct count.
std::size_t count_below_crossing(double phi, std::size_t steps) {
    const double x0 = 2.0 * static_cast<double>(steps) * phi / kPi;
    auto negative = [&](std::size_t k) {
        const double theta = static_cast<double>(k) * kPi / (2.0 * static_cast<double>(steps));
        return std::sin(theta - phi) < 0.0;
    };
    auto c = static_cast<std::size_t>(std::max(0.0, std::floor(x0)));
    c = std::min(c, steps - 1);
    while (c > 0 && !negative(c)) --c;
    while (c + 1 <= steps - 1 && negative(c + 1)) ++c;
    return c;
}

}  // namespace

std::vector<double> eigenvalues_closed_form(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const std::size_t n = disc.steps();
    const double a = 0.5 * config.omega * disc.delta_t();
    const double phi = std::atan(a);
    const double beta = 1.0 + a * a;
    std::vector<double> lambda(disc.interior());
    for (std::size_t k = 1; k < n; ++k) {
        const double theta = static_cast<double>(k) * kPi / (2.0 * static_cast<double>(n));
        lambda[k - 1] = 4.0 * beta * std::sin(theta - phi) * std::sin(theta + phi);
    }
    return lambda;
}

std::vector<double> eigenvalues_cosine_form(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const std::size_t n = disc.steps();
    const double wdt = config.omega * disc.delta_t();
    const double alpha = 1.0 - 0.25 * wdt * wdt;
    const double beta = 1.0 + 0.25 * wdt * wdt;
    std::vector<double> lambda(disc.interior());
    for (std::size_t k = 1; k < n; ++k)
        lambda[k - 1] = 2.0 * (alpha - beta * std::cos(static_cast<double>(k) * kPi / static_cast<double>(n)));
    return lambda;
}

std::vector<double> eigenvalues_tangent_form(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const std::size_t n = disc.steps();
    const double wdt = config.omega * disc.delta_t();
    std::vector<double> lambda(disc.interior());
    for (std::size_t k = 1; k < n; ++k) {
        const double half = static_cast<double>(k) * kPi / (2.0 * static_cast<double>(n));
        const double c = std::cos(half);
        const double t = std::tan(half);
        lambda[k - 1] = 4.0 * c * c * (-0.25 * wdt * wdt + t * t);
    }
    return lambda;
}

EigenvectorView eigenvector(const Discretization& disc, std::size_t k) {
    const std::size_t n = disc.steps();
    if (k < 1 || k > n - 1)
        throw InvalidArgument("eigenvector index " + std::to_string(k) + " outside 1.." + std::to_string(n - 1));
    EigenvectorView view{k, std::vector<double>(n - 1)};
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t l = 1; l < n; ++l) {
        // Reduce l k mod 2N so the sine argument stays in [0, 2 pi).
        const std::size_t lk = (l * k) % (2 * n);
        view.entries[l - 1] = scale * std::sin(static_cast<double>(lk) * kPi / static_cast<double>(n));
    }
    return view;
}

std::optional<double> zero_crossing(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    if (config.omega == 0.0) return std::nullopt;
    const double n = static_cast<double>(disc.steps());
    return 2.0 * n / kPi * std::atan(config.omega_time() / (2.0 * n));
}

Spectrum analyze(const OscillatorConfig& config, const Discretization& disc, double caustic_tol) {
    Spectrum s;
    s.eigenvalues = eigenvalues_closed_form(config, disc);
    s.zero_crossing = zero_crossing(config, disc);
    s.negative_count =
        static_cast<int>(std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [](double l) { return l < 0.0; }));
    const TimeClass tc = classify_time(config, caustic_tol);
    s.m_index = tc.m_index;
    s.maslov_l = tc.maslov_l;
    s.at_caustic = tc.at_caustic;
    s.counts_consistent = (s.negative_count == s.maslov_l);
    return s;
}

Spectrum classify(const OscillatorConfig& config, const Discretization& disc, double caustic_tol) {
    Spectrum s = analyze(config, disc, caustic_tol);
    if (!s.counts_consistent) {
        const std::size_t needed = minimal_stable_steps(config, caustic_tol);
        throw StepsTooSmall("N = " + std::to_string(disc.steps()) + " gives " + std::to_string(s.negative_count) +
                                " negative eigenvalues but L = " + std::to_string(s.maslov_l) +
                                "; counts stabilize from N = " + std::to_string(needed),
                            needed);
    }
    return s;
}

std::size_t minimal_stable_steps(const OscillatorConfig& config, double caustic_tol) {
    const TimeClass tc = classify_time(config, caustic_tol);
    if (config.omega == 0.0) return 2;
    const double wt = config.omega_time();
    auto stable = [&](std::size_t n) {
        const double phi = std::atan(wt / (2.0 * static_cast<double>(n)));
        return count_below_crossing(phi, n) == static_cast<std::size_t>(tc.maslov_l);
    };
    std::size_t hi = 2;
    while (!stable(hi)) {
        if (hi > (std::size_t{1} << 40))
            throw NumericalFailure("negative-eigenvalue count does not stabilize below N = 2^40");
        hi *= 2;
    }
    std::size_t lo = hi / 2;  // unstable, or 1 when hi == 2
    if (hi == 2) return 2;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (stable(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::size_t sturm_count(const DiscreteAction& action, double x) {
    const double d = action.diagonal();
    const double e2 = action.beta * action.beta;
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, e2);
    std::size_t count = 0;
    double q = d - x;
    for (std::size_t i = 0; i < action.dim; ++i) {
        if (i > 0) q = (d - x) - e2 / q;
        if (std::fabs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> eigenvalues_numeric(const DiscreteAction& action) {
    const std::size_t n = action.dim;
    if (n == 0) return {};
    if (n == 1) return {action.diagonal()};

    // Gershgorin enclosure.
    const double radius = 2.0 * std::fabs(action.beta);
    const double lower = action.diagonal() - radius;
    const double upper = action.diagonal() + radius;
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<double> out(n);
    double floor_k = lower;
    for (std::size_t k = 0; k < n; ++k) {
        double lo = floor_k;
        double hi = upper;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (sturm_count(action, mid) >= k + 1)
                hi = mid;
            else
                lo = mid;
            if (hi - lo <= 2.0 * eps * std::max(std::fabs(lo), std::fabs(hi)) + 1e-300) break;
        }
        out[k] = 0.5 * (lo + hi);
        floor_k = lo;
    }
    return out;
}

LogAbsProduct abs_eigenvalue_product(const OscillatorConfig& config, const Discretization& disc) {
    const auto lambda = eigenvalues_closed_form(config, disc);
    LogAbsProduct p;
    for (double l : lambda) {
        if (std::fabs(l) < 1e-300) throw NumericalFailure("degenerate spectrum: an eigenvalue is numerically zero");
        p.log_abs += std::log(std::fabs(l));
        if (l < 0.0) ++p.negative_count;
    }
    return p;
}

double log_abs_product_closed_form(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const double n = static_cast<double>(disc.steps());
    if (config.omega == 0.0) return std::log(n);
    const double a = config.omega_time() / (2.0 * n);
    const double two_theta = 2.0 * n * std::atan(a);
    // (N / omega T) |sigma|^2 |sin 2 theta| with sin 2 theta / omega T = sinc(2 theta) atan(a)/a.
    return std::log(n) + n * std::log1p(a * a) + std::log(std::fabs(detail::sinc(two_theta) * detail::atanc(a)));
}

}  // namespace hopath
