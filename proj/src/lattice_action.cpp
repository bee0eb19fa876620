#include "hopath/lattice_action.hpp"

#include <cmath>
#include <string>

#include "hopath/errors.hpp"

namespace hopath {

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw InvalidArgument("dense multiply: dimension mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<double> DiscreteAction::apply(std::span<const double> x) const {
    if (x.size() != dim) throw InvalidArgument("tridiagonal apply: dimension mismatch");
    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        double acc = diagonal() * x[i];
        if (i > 0) acc -= beta * x[i - 1];
        if (i + 1 < dim) acc -= beta * x[i + 1];
        y[i] = acc;
    }
    return y;
}

DenseMatrix DiscreteAction::dense() const {
    DenseMatrix a(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        a(i, i) = diagonal();
        if (i + 1 < dim) {
            a(i, i + 1) = off_diagonal();
            a(i + 1, i) = off_diagonal();
        }
    }
    return a;
}

DiscreteAction build_action(const OscillatorConfig& config, const Discretization& disc) {
    config.validate();
    const double wdt = config.omega * disc.delta_t();
    const double q = 0.25 * wdt * wdt;

    DiscreteAction action;
    action.alpha = 1.0 - q;
    action.beta = 1.0 + q;
    action.dim = disc.interior();
    action.vector_b.assign(action.dim, 0.0);
    // For N = 2 both boundary couplings land on the single interior point.
    action.vector_b.front() += -action.beta * config.x_initial;
    action.vector_b.back() += -action.beta * config.x_final;
    action.scalar_c = action.alpha * (config.x_initial * config.x_initial + config.x_final * config.x_final);
    return action;
}

double action_of_path(const OscillatorConfig& config, const Discretization& disc,
                      std::span<const double> path) {
    config.validate();
    if (path.size() != disc.steps() + 1)
        throw InvalidArgument("path must have N+1 = " + std::to_string(disc.steps() + 1) + " points, got " +
                              std::to_string(path.size()));
    if (path.front() != config.x_initial || path.back() != config.x_final)
        throw InvalidArgument("path endpoints do not match x_initial / x_final");

    const double dt = disc.delta_t();
    const double m = config.mass;
    const double w2 = config.omega * config.omega;
    double sum = 0.0;
    for (std::size_t j = 1; j < path.size(); ++j) {
        const double velocity = (path[j] - path[j - 1]) / dt;
        const double midpoint = 0.5 * (path[j] + path[j - 1]);
        sum += 0.5 * m * velocity * velocity - 0.5 * m * w2 * midpoint * midpoint;
    }
    return dt * sum;
}

double quadratic_form_value(const DiscreteAction& action, std::span<const double> interior, double mass,
                            double delta_t) {
    if (interior.size() != action.dim)
        throw InvalidArgument("interior vector has " + std::to_string(interior.size()) +
                              " entries, matrix dimension is " + std::to_string(action.dim));
    if (!(mass > 0.0) || !(delta_t > 0.0)) throw InvalidArgument("mass and delta_t must be positive");

    const auto ax = action.apply(interior);
    double xax = 0.0;
    double bx = 0.0;
    for (std::size_t i = 0; i < action.dim; ++i) {
        xax += interior[i] * ax[i];
        bx += action.vector_b[i] * interior[i];
    }
    return mass / (2.0 * delta_t) * (xax + 2.0 * bx + action.scalar_c);
}

}  // namespace hopath
