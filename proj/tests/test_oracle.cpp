#include <doctest.h>

#include <cmath>
#include <complex>

#include "hopath/caustic.hpp"
#include "hopath/errors.hpp"
#include "hopath/kernel.hpp"
#include "hopath/oracle.hpp"
#include "support/gaussian_oracle.hpp"
#include "support/seeded.hpp"

using namespace hopath;
using cd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

OscillatorConfig make(double m, double w, double h, double t, double xi, double xf) {
    OscillatorConfig c;
    c.mass = m;
    c.omega = w;
    c.hbar = h;
    c.time = t;
    c.x_initial = xi;
    c.x_final = xf;
    return c;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("Fresnel integral of the free particle") {
    const auto c = make(1, 0, 1, 1, 0, 1);
    const auto r = brute_force_fresnel(c, Discretization(c, 2));
    const cd expected = std::sqrt(1.0 / (2 * kPi)) * std::polar(1.0, 0.5 - 0.25 * kPi);
    CHECK(rel(r.value, expected) < 1e-7);
    CHECK(r.regularized.size() == r.spec.damping_epsilons.size());
}

TEST_CASE("Fresnel integral at three steps") {
    const auto c = make(1, 1, 1, 1, 0.2, 0.4);
    const Discretization d(c, 3);
    const auto r = brute_force_fresnel(c, d);
    // mpmath
    CHECK(rel(r.value, {0.28695965359206568413, -0.30479563927215972344}) < 1e-6);
    CHECK(rel(r.value, amplitude_of(discrete_kernel(c, d))) < 1e-6);
    CHECK(r.extrapolation_residual < 1e-5 * std::abs(r.value));
}

TEST_CASE("Fresnel integral at the origin is the prefactor") {
    const auto c = make(1.3, 0.8, 0.9, 3.0, 0.0, 0.0);
    for (std::size_t n : {2u, 3u, 4u}) {
        const Discretization d(c, n);
        const auto q = fluctuation_factor(c, d, analyze(c, d));
        CHECK(rel(brute_force_fresnel(c, d).value, q.value()) < 1e-6);
    }
}

TEST_CASE("Fresnel input validation") {
    const auto c = make(1, 1, 1, 1, 0, 0);
    CHECK_THROWS_AS(brute_force_fresnel(c, Discretization(c, 5)), InvalidArgument);
    QuadratureSpec spec = QuadratureSpec::automatic(c, Discretization(c, 2));
    spec.damping_epsilons = {0.1, 0.2, 0.05};
    CHECK_THROWS_AS(brute_force_fresnel(c, Discretization(c, 2), spec), InvalidArgument);
    spec = QuadratureSpec::automatic(c, Discretization(c, 2));
    spec.points_per_dim = 10;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
    spec = QuadratureSpec::automatic(c, Discretization(c, 2));
    spec.damping_epsilons.resize(2);
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("assembled kernel from dense elimination") {
    for (const auto& c : testing::random_tuples(20)) {
        for (std::size_t n : {2u, 3u, 17u, 64u}) {
            const Discretization d(c, n);
            const auto a = assembled_kernel(c, d);
            const auto k = lattice_kernel(c, d);
            CHECK(rel(a.amplitude, k.amplitude) < 1e-10);
            CHECK(a.maslov_index == analyze(c, d).negative_count);
        }
    }
}

TEST_CASE("coherent state returns at a full period") {
    const auto c = make(1, 1, 1, 1, 0, 0);
    const GaussianPacket coherent(0.7, 1.0);
    const auto full = measure_caustic_phase(c, coherent, 2, 8);
    CHECK(full.parity == 1);
    CHECK(full.expected_phase == doctest::Approx(-kPi));
    CHECK(std::fabs(std::remainder(full.measured_phase + kPi, 2 * kPi)) < 1e-6);
    CHECK(full.l2_deviation < 1e-6);

    const auto half = measure_caustic_phase(c, coherent, 1, 4);
    CHECK(half.parity == -1);
    CHECK(half.measured_phase == doctest::Approx(-0.5 * kPi).epsilon(1e-6));
    CHECK(half.l2_deviation < 1e-6);
}

TEST_CASE("squeezed packets also refocus at caustics") {
    const auto c = make(1.5, 2.0, 0.8, 1, 0, 0);
    const GaussianPacket squeezed(0.4, 0.25, 1.5);
    for (int m = 1; m <= 3; ++m) {
        const auto r = measure_caustic_phase(c, squeezed, m, 4 * m);
        CHECK(r.l2_deviation < 1e-6);
        CHECK(std::fabs(std::remainder(r.measured_phase - r.expected_phase, 2 * kPi)) < 1e-6);
    }
}

TEST_CASE("step composition against closed-form evolution") {
    const testing::Packet p{0.5, 0.6, 0.9};
    const GaussianPacket f(p.center, p.width, p.momentum);

    const auto free = make(1, 0, 1, 2.0, 0, 0);
    const auto psi = step_composition_evolve(free, f, 5);
    const testing::Oscillator fo{1.0, 0.0, 1.0};
    CHECK(l2_deviation(psi, [&](double x) { return testing::free_evolved(fo, p, 2.0, x); }) < 1e-6);

    const auto osc = make(1, 1, 1, 2.2 * kPi, 0, 0);
    const auto phi = step_composition_evolve(osc, f, 9);
    const testing::Oscillator o{1.0, 1.0, 1.0};
    CHECK(l2_deviation(phi, [&](double x) { return testing::oscillator_evolved(o, p, osc.time, x); }) < 1e-6);
}

TEST_CASE("step composition input checks") {
    const auto c = make(1, 1, 1, kPi, 0, 0);
    const GaussianPacket f(0.0, 1.0);
    CHECK_THROWS_AS(step_composition_evolve(c, f, 1), InvalidArgument);
    CHECK_THROWS_AS(step_composition_evolve(c, f, 0), InvalidArgument);
    CHECK_THROWS_AS(step_composition_evolve(c, f, 4, GridSpec{10.0, 11}), InvalidArgument);
    CHECK_THROWS_AS(measure_caustic_phase(make(1, 0, 1, 1, 0, 0), f, 1, 4), InvalidArgument);
    const auto fine = step_composition_evolve(c, f, 4);
    CHECK(fine.spacing <= fine.max_spacing);
}

TEST_CASE("Hermite functions") {
    const double x = 0.73;
    const auto h = hermite_functions(3, x);
    const double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    CHECK(h[0] == doctest::Approx(h0).epsilon(1e-15));
    CHECK(h[1] == doctest::Approx(std::sqrt(2.0) * x * h0).epsilon(1e-15));
    CHECK(h[2] == doctest::Approx((2 * x * x - 1) / std::sqrt(2.0) * h0).epsilon(1e-14));
    CHECK(h[3] == doctest::Approx((2 * x * x * x - 3 * x) / std::sqrt(3.0) * h0).epsilon(1e-14));

    // orthonormality by trapezoid on a wide grid
    const std::size_t n = 40;
    const double step = 0.02;
    std::vector<double> gram((n + 1) * (n + 1), 0.0);
    for (double y = -15.0; y <= 15.0; y += step) {
        const auto v = hermite_functions(n, y);
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j) gram[i * (n + 1) + j] += v[i] * v[j] * step;
    }
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) CHECK(std::fabs(gram[i * (n + 1) + j] - (i == j ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("eigenfunction expansion") {
    const GaussianPacket f(0.5, 0.7, 0.3);
    const auto full = make(1, 1, 1, 2 * kPi, 0, 0);
    CHECK(std::abs(eigenfunction_expansion_kernel(full, 128, f, 0.2).value + f(0.2)) < 1e-10);
    const auto half = make(1, 1, 1, kPi, 0, 0);
    CHECK(std::abs(eigenfunction_expansion_kernel(half, 128, f, 0.2).value - cd(0, -1) * f(-0.2)) < 1e-10);

    const testing::Oscillator o{1.0, 1.0, 1.0};
    const testing::Packet p{0.5, 0.7, 0.3};
    const auto c = make(1, 1, 1, 2.5 * kPi, 0, 0);
    for (double xf : {-0.6, 0.1, 1.4}) {
        const auto e = eigenfunction_expansion_kernel(c, 128, f, xf);
        CHECK(std::abs(e.value - testing::oscillator_evolved(o, p, c.time, xf)) < 1e-8);
        CHECK(e.tail_estimate < 1e-8);
    }

    CHECK_THROWS_AS(eigenfunction_expansion_kernel(make(1, 0, 1, 1, 0, 0), 16, f, 0.0), InvalidArgument);
    CHECK_THROWS_AS(eigenfunction_expansion_kernel(c, 4, GaussianPacket(2.0, 0.1), 0.0), NumericalFailure);
}

}
