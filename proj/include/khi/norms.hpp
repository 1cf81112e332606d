#ifndef KHI_NORMS_HPP
#define KHI_NORMS_HPP

#include <functional>

#include "khi/modes.hpp"

namespace khi {

// Spectral amplitude with compact support [band_lo, band_hi].
struct SpectralDensity {
    std::function<Complex(double)> amplitude;
    double band_lo = 0.0;
    double band_hi = 0.0;
};

// sqrt( int (1+eta^2)^j |amplitude|^2 d eta ), adaptive quadrature,
// relative tolerance 1e-8.
double front_norm(const SpectralDensity& density, int j);

// Per-eta exponential profile family over a band.
struct ProfileDensity {
    std::function<ExponentialProfile(double)> profile;
    double band_lo = 0.0;
    double band_hi = 0.0;
};

// Closed-form half-space Sobolev norm of an exponential-profile field:
// sqrt( sum_{s<=j} int (1+eta^2)^{j-s} |coef|^2 |decay|^{2s} / (2 Re decay) )
// using int_0^inf |d^s/dx2^s e^{-mu x2}|^2 dx2 = |mu|^{2s} / (2 Re mu).
double halfspace_norm_exponential(const ProfileDensity& density, int j);

// sampler(s, eta, x2) = s-th x2-derivative of the transformed field,
// x2 measured as distance from the interface into the half-space
struct QuadratureGrid {
    int n_eta = 257;
    int n_x2 = 2049;
    double x2_max = 30.0;
};

struct QuadratureNorm {
    double norm = 0.0;
    double tail_estimate = 0.0;   // last-node integrand contribution
    bool truncation_warning = false;
};

// Tensor-product trapezoid evaluation of the same norm; oracle for the
// closed form.
QuadratureNorm halfspace_norm_quadrature(
    const std::function<Complex(int, double, double)>& sampler,
    int j, double band_lo, double band_hi, const QuadratureGrid& grid);

// Sum of the four component norms.
double combined_norm(double f, double h, double v, double g);

}  // namespace khi

#endif  // KHI_NORMS_HPP
