#pragma once

#include <complex>

namespace hopath {

/// Unit-norm Gaussian test function
///   f(x) = (pi w^2)^{-1/4} exp(-(x - c)^2 / 2w^2 + i k x).
/// With w = sqrt(hbar / m omega) and k = 0 this is a coherent state.
/// f is entire, so it may be evaluated at complex arguments.
class GaussianPacket {
public:
    /// Throws InvalidArgument for a non-positive or non-finite width.
    GaussianPacket(double center, double width, double momentum = 0.0);

    double center() const noexcept { return center_; }
    double width() const noexcept { return width_; }
    double momentum() const noexcept { return momentum_; }

    std::complex<double> operator()(double x) const;
    std::complex<double> operator()(std::complex<double> x) const;

    /// log f(x), for building combined exponents without overflow.
    std::complex<double> log_value(std::complex<double> x) const;

    /// max |f| = (pi w^2)^{-1/4}.
    double peak() const noexcept;

private:
    double center_;
    double width_;
    double momentum_;
    double log_norm_;
};

}  // namespace hopath
