#include "hopath/config.hpp"

#include <cmath>
#include <string>

#include "hopath/errors.hpp"

namespace hopath {

void OscillatorConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(mass)) throw InvalidArgument("mass must be positive, got " + std::to_string(mass));
    if (!positive(hbar)) throw InvalidArgument("hbar must be positive, got " + std::to_string(hbar));
    if (!positive(time)) throw InvalidArgument("time must be positive, got " + std::to_string(time));
    if (!std::isfinite(omega) || omega < 0.0)
        throw InvalidArgument("omega must be non-negative, got " + std::to_string(omega));
    if (!std::isfinite(x_initial) || !std::isfinite(x_final))
        throw InvalidArgument("endpoints must be finite");
}

Discretization::Discretization(double time, std::size_t steps) : time_(time), steps_(steps) {
    if (steps < 2)
        throw InvalidArgument("lattice needs at least 2 steps, got " + std::to_string(steps));
    if (!std::isfinite(time) || time <= 0.0) throw InvalidArgument("time must be positive");
}

}  // namespace hopath
