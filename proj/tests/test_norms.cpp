#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "khi/norms.hpp"

using namespace khi;

TEST_CASE("front norm on simple densities") {
    SpectralDensity one;
    one.amplitude = [](double) { return Complex(1.0, 0.0); };
    one.band_lo = 0.0;
    one.band_hi = 1.0;
    CHECK(front_norm(one, 0) == doctest::Approx(1.0).epsilon(1e-10));
    // int_0^1 (1+eta^2) = 4/3
    CHECK(front_norm(one, 1) ==
          doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-10));
    CHECK_THROWS_AS(front_norm(one, -1), std::invalid_argument);
    SpectralDensity unbounded = one;
    unbounded.band_hi = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(front_norm(unbounded, 0), std::invalid_argument);
}

TEST_CASE("closed-form half-space norm matches analytic value") {
    // single profile e^{-(2+i) x2}, amplitude 3, j = 1, flat band [0,1]
    ProfileDensity d;
    d.profile = [](double) {
        return ExponentialProfile{Complex(3.0, 0.0), Complex(2.0, 1.0), +1};
    };
    d.band_lo = 0.0;
    d.band_hi = 1.0;
    const double mu2 = 5.0;  // |2+i|^2
    // s=0: int (1+eta^2) * 9/4 ; s=1: int 9*5/4
    const double expect =
        std::sqrt(9.0 / 4.0 * (4.0 / 3.0) + 9.0 * mu2 / 4.0);
    CHECK(halfspace_norm_exponential(d, 1) ==
          doctest::Approx(expect).epsilon(1e-10));

    ProfileDensity bad = d;
    bad.profile = [](double) {
        return ExponentialProfile{Complex(1.0, 0.0), Complex(-1.0, 0.0), +1};
    };
    CHECK_THROWS_AS(halfspace_norm_exponential(bad, 0), std::domain_error);
}

TEST_CASE("closed form agrees with the 2-D quadrature oracle") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::uniform_real_distribution<double> su(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex coef(su(rng), su(rng));
        const Complex base_decay(u(rng), su(rng));
        const int side = trial % 2 == 0 ? +1 : -1;
        ProfileDensity d;
        d.profile = [=](double eta) {
            // eta-dependent profile family
            return ExponentialProfile{coef * Complex(1.0, 0.3 * eta),
                                      base_decay + 0.2 * eta * eta, side};
        };
        d.band_lo = 0.0;
        d.band_hi = 1.5;
        const int j = trial % 5;
        const double closed = halfspace_norm_exponential(d, j);
        const QuadratureNorm quad = halfspace_norm_quadrature(
            [=](int s, double eta, double x2) {
                const ExponentialProfile p = d.profile(eta);
                // sampler depth measured into the half-space
                return p.derivative(s, side > 0 ? x2 : -x2);
            },
            j, d.band_lo, d.band_hi, QuadratureGrid{257, 2049, 45.0});
        CHECK(quad.norm == doctest::Approx(closed).epsilon(1e-6));
        CHECK_FALSE(quad.truncation_warning);
    }
}

TEST_CASE("quadrature norm flags truncation") {
    const QuadratureNorm quad = halfspace_norm_quadrature(
        [](int, double, double x2) {
            return Complex(std::exp(-0.01 * x2), 0.0);  // barely decays
        },
        0, 0.0, 1.0, QuadratureGrid{65, 257, 30.0});
    CHECK(quad.truncation_warning);
    CHECK_THROWS_AS(halfspace_norm_quadrature(
                        [](int, double, double) { return Complex(0.0); }, 0,
                        0.0, 1.0, QuadratureGrid{1, 2, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("combined norm is the component sum") {
    CHECK(combined_norm(1.0, 2.0, 3.0, 4.0) == 10.0);
}
