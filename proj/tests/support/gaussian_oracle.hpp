#pragma once

// Closed-form Gaussian integrals used as ground truth for smeared kernels
// and evolved packets. Nothing here calls into the library's kernel code.

#include <cmath>
#include <complex>

namespace hopath::testing {

using cd = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

/// int exp(-a x^2 + b x + c) dx over the real line, Re a > 0.
inline cd gaussian_integral(cd a, cd b, cd c) { return std::sqrt(kPi / a) * std::exp(b * b / (4.0 * a) + c); }

struct Oscillator {
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
};

struct Packet {
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;

    cd operator()(double x) const {
        const double d = x - center;
        return std::pow(kPi * width * width, -0.25) * std::exp(cd(-d * d / (2.0 * width * width), momentum * x));
    }
};

/// Exponent coefficients of the packet: f(x) = exp(-a x^2 + b x + c).
struct GaussianExponent {
    cd a, b, c;
};

inline GaussianExponent exponent_of(const Packet& f) {
    const double s = 1.0 / (2.0 * f.width * f.width);
    return {s, cd(2.0 * s * f.center, f.momentum),
            cd(-s * f.center * f.center - 0.25 * std::log(kPi * f.width * f.width), 0.0)};
}

/// psi(x, T) = int K(x, y; T) f(y) dy for the free particle.
inline cd free_evolved(const Oscillator& o, const Packet& f, double time, double x) {
    const GaussianExponent g = exponent_of(f);
    const double k = o.mass / (2.0 * o.hbar * time);
    const cd pref = std::sqrt(o.mass / (2.0 * kPi * o.hbar * time)) * std::polar(1.0, -0.25 * kPi);
    // exp(i k (x - y)^2)
    return pref * gaussian_integral(g.a - cd(0, k), g.b - cd(0, 2.0 * k * x), g.c + cd(0, k * x * x));
}

/// Same for the oscillator at a non-caustic time, from the Mehler form with
/// the prefactor sqrt(m omega / 2 pi hbar |sin|) exp(-i pi/4 - i floor(omega T/pi) pi/2).
inline cd oscillator_evolved(const Oscillator& o, const Packet& f, double time, double x) {
    const double wt = o.omega * time;
    const double s = std::sin(wt);
    const int m = static_cast<int>(std::floor(wt / kPi));
    const double k = o.mass * o.omega / (2.0 * o.hbar * s);
    const double cw = std::cos(wt);
    const cd pref = std::sqrt(o.mass * o.omega / (2.0 * kPi * o.hbar * std::fabs(s))) *
                    std::polar(1.0, -0.25 * kPi - 0.5 * kPi * m);
    const GaussianExponent g = exponent_of(f);
    // exp(i k (cos (x^2 + y^2) - 2 x y))
    return pref * gaussian_integral(g.a - cd(0, k * cw), g.b - cd(0, 2.0 * k * x), g.c + cd(0, k * cw * x * x));
}

/// int (pi r)^{-1/2} exp(-x^2 / r) f(x) dx.
inline cd heat_smoothed(const Packet& f, double r) {
    const GaussianExponent g = exponent_of(f);
    return gaussian_integral(g.a + 1.0 / r, g.b, g.c) / std::sqrt(kPi * r);
}

}  // namespace hopath::testing
