#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hopath/config.hpp"

namespace hopath {

/// Row-major dense matrix. Only used to cross-check the compact forms.
class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::vector<double> multiply(std::span<const double> x) const;

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Quadratic form of the lattice action,
///   S = (m / 2 dt) (x^T A x + 2 b^T x + c),
/// over the N-1 interior points. A is symmetric tridiagonal with constant
/// diagonal 2 alpha and off-diagonal -beta, so only alpha and beta are kept.
struct DiscreteAction {
    double alpha;
    double beta;
    std::size_t dim;
    std::vector<double> vector_b;
    double scalar_c;

    double diagonal() const noexcept { return 2.0 * alpha; }
    double off_diagonal() const noexcept { return -beta; }

    /// A x without materializing A.
    std::vector<double> apply(std::span<const double> x) const;
    DenseMatrix dense() const;
};

/// Throws InvalidArgument on an invalid config.
DiscreteAction build_action(const OscillatorConfig& config, const Discretization& disc);

/// Midpoint lattice action of a full path x_0 = x_I, ..., x_N = x_F:
///   S = dt * sum_j [ (m/2)(dx_j/dt)^2 - (m/2) omega^2 xbar_j^2 ].
double action_of_path(const OscillatorConfig& config, const Discretization& disc,
                      std::span<const double> path);

/// (m / 2 dt)(x^T A x + 2 b^T x + c) for the interior points x.
double quadratic_form_value(const DiscreteAction& action, std::span<const double> interior,
                            double mass, double delta_t);

}  // namespace hopath
