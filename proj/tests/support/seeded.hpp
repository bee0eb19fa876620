#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hopath/config.hpp"

namespace hopath::testing {

/// Seed for every randomized test in the suite.
inline constexpr std::uint64_t kSeed = 20240611;

/// Random oscillator tuples with omega T / pi in (0.05, 4) and a fractional
/// part in [0.1, 0.9], away from caustics.
inline std::vector<OscillatorConfig> random_tuples(std::size_t count, std::uint64_t seed = kSeed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mass(0.5, 2.0), omega(0.5, 2.0), hbar(0.5, 1.5), frac(0.1, 0.9),
        endpoint(-1.0, 1.0);
    std::uniform_int_distribution<int> period(0, 3);
    std::vector<OscillatorConfig> out;
    while (out.size() < count) {
        OscillatorConfig c;
        c.mass = mass(rng);
        c.omega = omega(rng);
        c.hbar = hbar(rng);
        const double wt_over_pi = period(rng) + frac(rng);
        c.time = wt_over_pi * 3.14159265358979323846 / c.omega;
        c.x_initial = endpoint(rng);
        c.x_final = endpoint(rng);
        out.push_back(c);
    }
    return out;
}

}  // namespace hopath::testing
