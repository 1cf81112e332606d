#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "khi/state.hpp"

using namespace khi;

TEST_CASE("pressure laws and sound speed") {
    const PressureLaw lin = PressureLaw::linear(2.0);
    CHECK(sound_speed(lin, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lin.evaluate(3.0) == doctest::Approx(12.0));

    const PressureLaw pow14 = PressureLaw::power(1.4);
    CHECK(sound_speed(pow14, 1.0) ==
          doctest::Approx(std::sqrt(1.4)).epsilon(1e-14));
    CHECK(sound_speed(pow14, 1.0) == doctest::Approx(1.18322).epsilon(1e-5));

    CHECK_THROWS_AS(sound_speed(lin, 0.0), std::domain_error);
    CHECK_THROWS_AS(sound_speed(lin, -1.0), std::domain_error);
    // p' < 0 is not hyperbolic
    const PressureLaw bad{[](double r) { return -r; },
                          [](double) { return -1.0; }};
    CHECK_THROWS_AS(sound_speed(bad, 1.0), std::domain_error);
}

TEST_CASE("elastic and Mach numbers") {
    BackgroundState s;
    s.c = 1.0;
    s.g11_plus = 0.6;
    s.g12_plus = 0.8;
    s.v1_plus = 1.5;
    CHECK(s.elastic_number() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.mach_number() == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(s.g_sq() == doctest::Approx(1.0).epsilon(1e-14));

    const auto [K, M] = elastic_parameters(s);
    CHECK(K == doctest::Approx(1.0));
    CHECK(M == doctest::Approx(1.5));

    // lower side mirrors with flipped signs
    CHECK(s.v1_minus() == -1.5);
    CHECK(s.g11_minus() == -0.6);
    CHECK(s.v1(-1) == -1.5);
    CHECK(s.g1j(-1, 2) == -0.8);
    CHECK(s.rho_minus() == s.rho_dot);
}

TEST_CASE("validation rejects bad backgrounds") {
    BackgroundState s;
    CHECK_NOTHROW(s.validate());
    s.rho_dot = -1.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s = BackgroundState{};
    s.c = 0.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s = BackgroundState{};
    s.eps0 = 0.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s = BackgroundState{};
    s.v1_plus = std::nan("");
    CHECK_THROWS_AS(s.validate(), std::domain_error);
}

TEST_CASE("from_law wires the sound speed") {
    const BackgroundState s =
        BackgroundState::from_law(PressureLaw::power(1.4), 1.0, 1.2, 0.0, 0.0);
    CHECK(s.c == doctest::Approx(std::sqrt(1.4)).epsilon(1e-14));
    CHECK(s.v1_plus == 1.2);
    CHECK_THROWS_AS(
        BackgroundState::from_law(PressureLaw::linear(), -1.0, 0.0, 0.0, 0.0),
        std::domain_error);
}

TEST_CASE("stability window bounds and classification") {
    BackgroundState s;
    s.c = 1.0;
    s.g11_plus = 1.0;  // K = 1
    s.eps0 = 0.05;

    s.v1_plus = 1.5;
    StabilityWindow w = stability_window(s);
    CHECK(w.u_low == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.u_upp == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(w.u_upp == doctest::Approx(1.73205).epsilon(1e-5));
    CHECK(w.classification == WindowClass::InUniformWindow);
    CHECK(w.in_open_window(1.5));

    s.v1_plus = 1.01;  // inside the open window but within eps0 of the edge
    CHECK(stability_window(s).classification == WindowClass::MarginalBand);

    s.v1_plus = 1.0;  // endpoint counts as below
    CHECK(stability_window(s).classification == WindowClass::BelowWindow);
    s.v1_plus = 0.5;
    CHECK(stability_window(s).classification == WindowClass::BelowWindow);
    s.v1_plus = 2.0;
    CHECK(stability_window(s).classification == WindowClass::AboveWindow);
    s.v1_plus = -1.5;  // speed is |v1|
    CHECK(stability_window(s).classification == WindowClass::InUniformWindow);

    CHECK(to_string(WindowClass::MarginalBand) == "MarginalBand");
}
