#ifndef KHI_MODES_HPP
#define KHI_MODES_HPP

#include <functional>
#include <vector>

#include "khi/dispersion.hpp"

namespace khi {

// x2 |-> coefficient * e^{-decay*x2} on the upper half-line (side = +1),
// coefficient * e^{+decay*x2} on the lower one (side = -1). Bounded on its
// side because Re(decay) > 0.
struct ExponentialProfile {
    Complex coefficient{0.0, 0.0};
    Complex decay{1.0, 0.0};
    int side = +1;

    Complex value(double x2) const {
        return coefficient * std::exp(side > 0 ? -decay * x2 : decay * x2);
    }
    // s-th x2-derivative at x2
    Complex derivative(int s, double x2) const {
        Complex rate = side > 0 ? -decay : decay;
        Complex factor = 1.0;
        for (int k = 0; k < s; ++k) factor *= rate;
        return factor * value(x2);
    }
};

// Per-wavenumber normal mode. Index 0 = upper side, 1 = lower side.
struct NormalMode {
    double eta = 0.0;
    Complex tau;
    Complex g_hat;
    ExponentialProfile m_hat[2];
    ExponentialProfile w1_hat[2];
    ExponentialProfile w2_hat[2];
    ExponentialProfile e_hat[2][2][2];  // [i-1][j-1][side]
};

// Pressure profiles of the mode; the two jump conditions hold for any
// (tau,eta) in Xi.
void build_pressure(const BackgroundState& state, double eta, Complex tau,
                    Complex g_hat, NormalMode& mode);

void build_velocity(const BackgroundState& state, double eta, Complex tau,
                    Complex g_hat, NormalMode& mode);

void build_deformation(const BackgroundState& state, double eta, Complex tau,
                       Complex g_hat, NormalMode& mode);

// Full mode (pressure + velocity + deformation).
NormalMode build_mode(const BackgroundState& state, double eta, Complex tau,
                      Complex g_hat);

// On-shell mode at tau = X1*eta.
NormalMode build_mode_on_shell(const BackgroundState& state, double eta,
                               Complex g_hat);

// Max relative residual of the interior equations (mass, momentum,
// deformation transport, second-order pressure equation) at the given
// sample depths, both sides.
double interior_residual(const BackgroundState& state, const NormalMode& mode,
                         const std::vector<double>& sample_x2);

// Relative residuals of the interface conditions; the last three hold only
// on-shell.
struct BoundaryResiduals {
    double pressure_continuity = 0.0;
    double pressure_derivative_jump = 0.0;
    double kinematic = 0.0;
    double velocity_jump = 0.0;
    double deformation_bc[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // [j-1][side]

    double max() const;
};

BoundaryResiduals boundary_residuals(const BackgroundState& state,
                                     const NormalMode& mode);

// Symbol applied to g_hat; vanishes iff on-shell or g_hat = 0.
Complex front_symbol_residual(const BackgroundState& state, double eta,
                              Complex tau, Complex g_hat);

enum class FieldId { Front, H, W1, W2, E11, E21, E12, E22 };

// Band-limited superposition of on-shell modes with spectral amplitude
// chi(eta) on [band_lo, band_hi].
struct ModeSpec {
    BackgroundState state;
    std::function<double(double)> chi;
    double band_lo = 0.0;
    double band_hi = 0.0;
    int points_per_unit = 512;
};

// Real field at time t on the requested grid; x2 is ignored for the front.
// Inverse transform f(t,x1) = Re (1/(4 pi^2)) \int e^{X1 eta t} chi(eta)
// (profile at x2) e^{i eta x1} d eta, trapezoid rule on a uniform eta grid.
struct Field2D {
    std::vector<double> x1;
    std::vector<double> x2;
    std::vector<double> values;  // row-major: values[i1*nx2 + i2]
    double at(int i1, int i2) const { return values[i1 * x2.size() + i2]; }
};

Field2D synthesize_physical(const ModeSpec& request, FieldId field, double t,
                            const std::vector<double>& x1,
                            const std::vector<double>& x2);

}  // namespace khi

#endif  // KHI_MODES_HPP
