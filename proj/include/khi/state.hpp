#ifndef KHI_STATE_HPP
#define KHI_STATE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace khi {

// Barotropic pressure law p(rho) with its derivative. Strict hyperbolicity
// requires p'(rho) > 0 for every rho > 0.
struct PressureLaw {
    std::function<double(double)> evaluate;
    std::function<double(double)> derivative;

    // p = c0^2 * rho (constant sound speed c0)
    static PressureLaw linear(double c0 = 1.0);
    // p = rho^gamma
    static PressureLaw power(double gamma);
};

// c(rho) = sqrt(p'(rho))
double sound_speed(const PressureLaw& law, double rho);

enum class WindowClass {
    BelowWindow,
    InUniformWindow,
    MarginalBand,
    AboveWindow,
};

std::string to_string(WindowClass c);

// Rectilinear background: upper-fluid values are stored, lower-fluid values
// follow by antisymmetry (velocity and deformation flip sign, density is
// shared).
struct BackgroundState {
    double rho_dot = 1.0;
    double v1_plus = 0.0;
    double g11_plus = 0.0;
    double g12_plus = 0.0;
    double c = 1.0;
    double eps0 = 0.05;

    // lower-fluid accessors
    double v1_minus() const { return -v1_plus; }
    double g11_minus() const { return -g11_plus; }
    double g12_minus() const { return -g12_plus; }
    double rho_minus() const { return rho_dot; }

    // |G1.|^2 = g11^2 + g12^2
    double g_sq() const { return g11_plus * g11_plus + g12_plus * g12_plus; }

    double elastic_number() const;  // K = sqrt(g_sq)/c
    double mach_number() const;     // M = |v1_plus|/c

    // signed per-side values; side = +1 upper, -1 lower
    double v1(int side) const { return side >= 0 ? v1_plus : -v1_plus; }
    double g1j(int side, int j) const {
        double g = (j == 1) ? g11_plus : g12_plus;
        return side >= 0 ? g : -g;
    }

    void validate() const;

    // background with c = sqrt(p'(rho))
    static BackgroundState from_law(const PressureLaw& law, double rho,
                                    double v1, double g11, double g12,
                                    double eps0 = 0.05);
};

// (K, M) of a background state. Throws if c <= 0.
std::pair<double, double> elastic_parameters(const BackgroundState& state);

struct StabilityWindow {
    double u_low = 0.0;   // c*K
    double u_upp = 0.0;   // c*sqrt(K^2+2)
    double eps0 = 0.0;
    WindowClass classification = WindowClass::BelowWindow;

    bool in_open_window(double speed) const {
        return speed > u_low && speed < u_upp;
    }
};

StabilityWindow stability_window(const BackgroundState& state);

}  // namespace khi

#endif  // KHI_STATE_HPP
