#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "khi/modes.hpp"

using namespace khi;

namespace {

BackgroundState euler_state() {
    BackgroundState s;  // K = 0, M = 1
    s.v1_plus = 1.0;
    s.eps0 = 0.1;
    return s;
}

BackgroundState elastic_state() {
    BackgroundState s;  // K = 1, M = 1.5
    s.g11_plus = 0.6;
    s.g12_plus = 0.8;
    s.v1_plus = 1.5;
    s.eps0 = 0.05;
    return s;
}

const std::vector<double> kDepths = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0};

}  // namespace

TEST_CASE("frozen pressure coefficient") {
    const NormalMode mode =
        build_mode_on_shell(euler_state(), 1.0, Complex(1.0, 0.0));
    const Complex coef = mode.m_hat[0].coefficient;
    CHECK(coef.real() == doctest::Approx(0.0));
    CHECK(coef.imag() == doctest::Approx(1.2360679774997898).epsilon(1e-13));
    // identity: the pressure coefficient equals (mu+ - mu-) g_hat
    const MuPair m = mu_pair(euler_state(), {mode.tau, 1.0});
    CHECK(std::abs(coef - (m.mu_plus - m.mu_minus)) < 1e-13);
    // both sides share the interface value
    CHECK(std::abs(mode.m_hat[0].value(0.0) - mode.m_hat[1].value(0.0)) <
          1e-15);
}

TEST_CASE("on-shell mode solves interior and boundary rows") {
    for (const BackgroundState& s : {euler_state(), elastic_state()}) {
        const NormalMode mode = build_mode_on_shell(s, 1.3, Complex(0.7, 0.2));
        CHECK(interior_residual(s, mode, kDepths) < 1e-12);
        CHECK(boundary_residuals(s, mode).max() < 1e-12);
        CHECK(std::abs(front_symbol_residual(s, 1.3, mode.tau,
                                             mode.g_hat)) < 1e-10);
    }
}

TEST_CASE("off-shell point keeps pressure rows only") {
    const BackgroundState s = euler_state();
    const Complex tau(0.3, 0.0);
    const NormalMode mode = build_mode(s, 1.0, tau, Complex(1.0, 0.0));
    const BoundaryResiduals r = boundary_residuals(s, mode);
    CHECK(r.pressure_continuity < 1e-13);
    CHECK(r.pressure_derivative_jump < 1e-13);
    CHECK(r.kinematic > 1e-3);
    CHECK(std::abs(front_symbol_residual(s, 1.0, tau, Complex(1.0, 0.0))) >
          1e-3);
    // interior equations hold for any Xi point by construction
    CHECK(interior_residual(s, mode, kDepths) < 1e-12);
}

TEST_CASE("zero background shear kills the deformation") {
    const NormalMode mode =
        build_mode_on_shell(euler_state(), 1.0, Complex(1.0, 0.0));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int side = 0; side < 2; ++side)
                CHECK(std::abs(mode.e_hat[i][j][side].coefficient) == 0.0);
}

TEST_CASE("mode construction guards") {
    const BackgroundState s = euler_state();
    // outside Xi
    CHECK_THROWS_AS(build_mode(s, 1.0, Complex(-0.1, 0.0), Complex(1.0, 0.0)),
                    std::domain_error);
    // outside the window there is no on-shell root
    BackgroundState below;
    below.g11_plus = 1.0;
    below.v1_plus = 0.5;
    CHECK_THROWS_AS(build_mode_on_shell(below, 1.0, Complex(1.0, 0.0)),
                    std::domain_error);
}

TEST_CASE("profiles decay away from the interface") {
    const NormalMode mode =
        build_mode_on_shell(elastic_state(), 2.0, Complex(1.0, 0.0));
    CHECK(std::abs(mode.w1_hat[0].value(10.0)) <
          1e-3 * std::abs(mode.w1_hat[0].value(0.0)));
    CHECK(std::abs(mode.w1_hat[1].value(-10.0)) <
          1e-3 * std::abs(mode.w1_hat[1].value(0.0)));
    // derivative consistency
    const Complex d = mode.w2_hat[0].derivative(1, 0.7);
    const double h = 1e-6;
    const Complex fd =
        (mode.w2_hat[0].value(0.7 + h) - mode.w2_hat[0].value(0.7 - h)) /
        (2.0 * h);
    CHECK(std::abs(d - fd) < 1e-8 * std::abs(d));
}

TEST_CASE("physical synthesis converges and grows at the analytic rate") {
    ModeSpec request;
    request.state = euler_state();
    request.chi = [](double eta) {
        const double t = 2.0 * (eta - 1.0) - 1.0;
        return (t > -1.0 && t < 1.0) ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
    };
    request.band_lo = 1.0;
    request.band_hi = 2.0;
    request.points_per_unit = 256;
    const std::vector<double> x1 = {0.0, 0.5, 1.0};
    const std::vector<double> x2 = {0.0};

    const Field2D f0 = synthesize_physical(request, FieldId::Front, 0.0, x1, x2);
    ModeSpec fine = request;
    fine.points_per_unit = 512;
    const Field2D f0b = synthesize_physical(fine, FieldId::Front, 0.0, x1, x2);
    for (int i = 0; i < 3; ++i)
        CHECK(f0.at(i, 0) == doctest::Approx(f0b.at(i, 0)).epsilon(1e-8));

    // a single-eta-narrow band grows like e^{X1 eta t} pointwise in norm
    const Field2D h0 = synthesize_physical(request, FieldId::H, 0.0, x1,
                                           {0.3, -0.3});
    const Field2D h1 = synthesize_physical(request, FieldId::H, 1.0, x1,
                                           {0.3, -0.3});
    double n0 = 0.0, n1 = 0.0;
    for (double v : h0.values) n0 += v * v;
    for (double v : h1.values) n1 += v * v;
    const double x1_rate = quartic_roots(request.state).x1;
    const double ratio = std::sqrt(n1 / n0);
    // band spans eta in (1,2): growth between e^{X1} and e^{2 X1}
    CHECK(ratio > std::exp(x1_rate) * 0.9);
    CHECK(ratio < std::exp(2.0 * x1_rate) * 1.1);

    ModeSpec bad = request;
    bad.band_hi = bad.band_lo;
    CHECK_THROWS_AS(synthesize_physical(bad, FieldId::Front, 0.0, x1, x2),
                    std::invalid_argument);
}
