#include "hopath/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace hopath {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    std::complex<double> value;
    double error;

    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const ComplexIntegrand& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> kronrod = kKronrodWeights[7] * f(mid);
    std::complex<double> gauss = kGaussWeights[3] * f(mid);
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const std::complex<double> pair = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b, double abs_tol,
                                    std::size_t max_panels) {
    QuadratureResult result;
    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod(f, a, b);
    result.evaluations = 15;
    std::complex<double> total = first.value;
    double error = first.error;
    panels.push(first);

    while (error > abs_tol && panels.size() < max_panels) {
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod(f, worst.a, mid);
        Panel right = gauss_kronrod(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    result.value = total;
    result.error_estimate = error;
    result.converged = error <= abs_tol;
    return result;
}

QuadratureResult integrate_decaying(const ComplexIntegrand& f, double center, double half_width, double abs_tol,
                                    std::size_t max_shells) {
    QuadratureResult result = integrate_adaptive(f, center - half_width, center + half_width, 0.5 * abs_tol);
    double inner = half_width;
    double budget = 0.5 * abs_tol;
    for (std::size_t shell = 0; shell < max_shells; ++shell) {
        const double outer = 2.0 * inner;
        const QuadratureResult lo = integrate_adaptive(f, center - outer, center - inner, 0.25 * budget);
        const QuadratureResult hi = integrate_adaptive(f, center + inner, center + outer, 0.25 * budget);
        result.value += lo.value + hi.value;
        result.error_estimate += lo.error_estimate + hi.error_estimate;
        result.evaluations += lo.evaluations + hi.evaluations;
        result.converged = result.converged && lo.converged && hi.converged;
        budget *= 0.5;
        inner = outer;
        if (std::abs(lo.value) + std::abs(hi.value) < 0.01 * abs_tol) return result;
    }
    result.converged = false;
    return result;
}

}  // namespace hopath
