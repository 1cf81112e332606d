#ifndef KHI_DISPERSION_HPP
#define KHI_DISPERSION_HPP

#include <complex>

#include "khi/state.hpp"

namespace khi {

using Complex = std::complex<double>;

// A point (tau, eta) of the frequency set: Re(tau) > 0, (tau,eta) != (0,0).
struct FrequencyPoint {
    Complex tau;
    double eta = 0.0;

    bool in_xi() const {
        return tau.real() > 0.0 && !(tau == Complex(0.0) && eta == 0.0);
    }
};

// Square root with Re >= 0: w = sqrt((r+a)/2) + i*sign(b)*sqrt((r-a)/2)
// for z = a+ib, r = |z|, with sign(0) := +1.
Complex complex_sqrt_halfplane(Complex z);

// Decay rates of the pressure mode on the two half-lines, plus the Cartesian
// data (a, b, r) of the radicand that defines mu_plus.
struct MuPair {
    Complex mu_plus;
    Complex mu_minus;
    double a = 0.0;
    double b = 0.0;
    double r = 0.0;
};

MuPair mu_pair(const BackgroundState& state, const FrequencyPoint& p);

// Characteristic symbol of the front equation, two algebraic routes.
Complex symbol_direct(const BackgroundState& state, const FrequencyPoint& p);
Complex symbol_reduced(const BackgroundState& state, const FrequencyPoint& p);

// Real roots-in-X^2 of the biquadratic symbol polynomial.
struct SymbolRoots {
    double x1_sq = 0.0;   // plus branch
    double x2_sq = 0.0;   // minus branch (always negative)
    double x1 = 0.0;      // sqrt(x1_sq) when x1_sq >= 0, else 0 with has_x1=false
    bool has_x1 = false;
    double lambda = 0.0;  // front wave coefficient, = x1_sq
    double y2 = 0.0;      // X2 = i*Y2
};

SymbolRoots quartic_roots(const BackgroundState& state);

// X1 * |eta|; throws when the speed is outside the open instability window.
double growth_rate(const BackgroundState& state, double eta);

struct SimpleRootCheck {
    double phi_value = 0.0;  // |mu~+ mu~- - 1| at X = X1
    double dphi_dx = 0.0;    // central finite difference of Re(phi)
};

SimpleRootCheck check_simple_root(const BackgroundState& state, double eta);

// Numerical confirmation that tau = i*Y2*eta is not an unstable root:
// mu~+ mu~- tends to -1 there and Re(tau) = 0.
struct X2ExclusionReport {
    double y2 = 0.0;
    Complex mu_product;          // mu~+ mu~- just off the imaginary axis
    double distance_to_minus_one = 0.0;
    bool tau_in_xi = false;      // always false: Re(i*Y2*eta) = 0
};

X2ExclusionReport verify_x2_excluded(const BackgroundState& state);

// Closed-form constants of the ill-posedness norm estimates.
struct BoundConstants {
    double c1 = 0.0;
    double c_star = 0.0;
    double c2 = 0.0;   // dimensionless; the prefactor bound is C2/c
    double c3 = 0.0;
};

BoundConstants bound_constants(const BackgroundState& state);

}  // namespace khi

#endif  // KHI_DISPERSION_HPP
