#include "hopath/gaussian_packet.hpp"

#include <cmath>

#include "detail/numeric.hpp"
#include "hopath/errors.hpp"

namespace hopath {

GaussianPacket::GaussianPacket(double center, double width, double momentum)
    : center_(center), width_(width), momentum_(momentum) {
    if (!std::isfinite(width) || width <= 0.0) throw InvalidArgument("packet width must be positive");
    if (!std::isfinite(center) || !std::isfinite(momentum)) throw InvalidArgument("packet parameters must be finite");
    log_norm_ = -0.25 * std::log(detail::kPi * width * width);
}

std::complex<double> GaussianPacket::log_value(std::complex<double> x) const {
    const std::complex<double> d = x - center_;
    return log_norm_ - d * d / (2.0 * width_ * width_) + std::complex<double>(0.0, momentum_) * x;
}

std::complex<double> GaussianPacket::operator()(std::complex<double> x) const { return std::exp(log_value(x)); }

std::complex<double> GaussianPacket::operator()(double x) const {
    const double d = x - center_;
    return std::polar(std::exp(log_norm_ - d * d / (2.0 * width_ * width_)), momentum_ * x);
}

double GaussianPacket::peak() const noexcept { return std::exp(log_norm_); }

}  // namespace hopath
