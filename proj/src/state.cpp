#include "khi/state.hpp"

#include <cmath>

namespace khi {

PressureLaw PressureLaw::linear(double c0) {
    const double c0sq = c0 * c0;
    return PressureLaw{
        [c0sq](double rho) { return c0sq * rho; },
        [c0sq](double) { return c0sq; },
    };
}

PressureLaw PressureLaw::power(double gamma) {
    return PressureLaw{
        [gamma](double rho) { return std::pow(rho, gamma); },
        [gamma](double rho) { return gamma * std::pow(rho, gamma - 1.0); },
    };
}

double sound_speed(const PressureLaw& law, double rho) {
    if (!(rho > 0.0)) {
        throw std::domain_error("sound_speed: rho must be positive, got " +
                                std::to_string(rho));
    }
    const double dp = law.derivative(rho);
    if (!(dp > 0.0)) {
        throw std::domain_error(
            "sound_speed: p'(rho) must be positive, got p'(" +
            std::to_string(rho) + ") = " + std::to_string(dp));
    }
    return std::sqrt(dp);
}

std::string to_string(WindowClass c) {
    switch (c) {
        case WindowClass::BelowWindow: return "BelowWindow";
        case WindowClass::InUniformWindow: return "InUniformWindow";
        case WindowClass::MarginalBand: return "MarginalBand";
        case WindowClass::AboveWindow: return "AboveWindow";
    }
    return "?";
}

double BackgroundState::elastic_number() const {
    return std::sqrt(g_sq()) / c;
}

double BackgroundState::mach_number() const {
    return std::abs(v1_plus) / c;
}

void BackgroundState::validate() const {
    if (!(rho_dot > 0.0)) {
        throw std::domain_error("BackgroundState: rho_dot must be positive, got " +
                                std::to_string(rho_dot));
    }
    if (!(c > 0.0)) {
        throw std::domain_error("BackgroundState: sound speed must be positive, got " +
                                std::to_string(c));
    }
    if (!(eps0 > 0.0)) {
        throw std::domain_error("BackgroundState: eps0 must be positive, got " +
                                std::to_string(eps0));
    }
    if (!std::isfinite(v1_plus) || !std::isfinite(g11_plus) ||
        !std::isfinite(g12_plus)) {
        throw std::domain_error("BackgroundState: nonfinite background value");
    }
}

BackgroundState BackgroundState::from_law(const PressureLaw& law, double rho,
                                          double v1, double g11, double g12,
                                          double eps0) {
    BackgroundState s;
    s.rho_dot = rho;
    s.v1_plus = v1;
    s.g11_plus = g11;
    s.g12_plus = g12;
    s.c = sound_speed(law, rho);
    s.eps0 = eps0;
    s.validate();
    return s;
}

std::pair<double, double> elastic_parameters(const BackgroundState& state) {
    if (!(state.c > 0.0)) {
        throw std::domain_error("elastic_parameters: c must be positive, got " +
                                std::to_string(state.c));
    }
    return {state.elastic_number(), state.mach_number()};
}

StabilityWindow stability_window(const BackgroundState& state) {
    const double K = state.elastic_number();
    StabilityWindow w;
    w.u_low = state.c * K;
    w.u_upp = state.c * std::sqrt(K * K + 2.0);
    w.eps0 = state.eps0;

    const double speed = std::abs(state.v1_plus);
    const double margin = state.c * state.eps0;
    if (speed >= w.u_low + margin && speed <= w.u_upp - margin) {
        w.classification = WindowClass::InUniformWindow;
    } else if (speed > w.u_low && speed < w.u_upp) {
        w.classification = WindowClass::MarginalBand;
    } else if (speed <= w.u_low) {
        w.classification = WindowClass::BelowWindow;
    } else {
        w.classification = WindowClass::AboveWindow;
    }
    return w;
}

}  // namespace khi
