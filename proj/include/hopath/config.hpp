#pragma once

#include <cstddef>

namespace hopath {

/// Physical parameters of the oscillator and the propagation endpoints.
struct OscillatorConfig {
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
    double time = 1.0;
    double x_initial = 0.0;
    double x_final = 0.0;

    /// Throws InvalidArgument unless mass, hbar, time > 0 and omega >= 0.
    void validate() const;

    double omega_time() const noexcept { return omega * time; }

    OscillatorConfig with_time(double t) const noexcept {
        OscillatorConfig c = *this;
        c.time = t;
        return c;
    }
    OscillatorConfig with_endpoints(double xi, double xf) const noexcept {
        OscillatorConfig c = *this;
        c.x_initial = xi;
        c.x_final = xf;
        return c;
    }
};

/// Time lattice with N steps over the interval T. The step length is always
/// derived from (T, N).
class Discretization {
public:
    /// Throws InvalidArgument for steps < 2 or a non-positive time.
    Discretization(double time, std::size_t steps);
    explicit Discretization(const OscillatorConfig& config, std::size_t steps)
        : Discretization(config.time, steps) {}

    std::size_t steps() const noexcept { return steps_; }
    std::size_t interior() const noexcept { return steps_ - 1; }
    double time() const noexcept { return time_; }
    double delta_t() const noexcept { return time_ / static_cast<double>(steps_); }

private:
    double time_;
    std::size_t steps_;
};

}  // namespace hopath
