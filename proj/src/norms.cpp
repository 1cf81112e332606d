#include "khi/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "khi/quadrature.hpp"

namespace khi {

double front_norm(const SpectralDensity& density, int j) {
    if (j < 0) throw std::invalid_argument("front_norm: j must be >= 0");
    if (!std::isfinite(density.band_lo) || !std::isfinite(density.band_hi)) {
        throw std::invalid_argument("front_norm: unbounded support");
    }
    const double val = integrate(
        [&](double eta) {
            const double w = std::pow(1.0 + eta * eta, j);
            const Complex a = density.amplitude(eta);
            return w * std::norm(a);
        },
        density.band_lo, density.band_hi, 1e-8);
    return std::sqrt(std::max(val, 0.0));
}

double halfspace_norm_exponential(const ProfileDensity& density, int j) {
    if (j < 0)
        throw std::invalid_argument("halfspace_norm_exponential: j >= 0 required");
    double total = 0.0;
    for (int s = 0; s <= j; ++s) {
        total += integrate(
            [&](double eta) {
                const ExponentialProfile p = density.profile(eta);
                const double re = p.decay.real();
                if (!(re > 0.0)) {
                    throw std::domain_error(
                        "halfspace_norm_exponential: Re(decay) <= 0 at eta = " +
                        std::to_string(eta));
                }
                const double mu_abs = std::abs(p.decay);
                return std::pow(1.0 + eta * eta, j - s) *
                       std::norm(p.coefficient) *
                       std::pow(mu_abs, 2 * s) / (2.0 * re);
            },
            density.band_lo, density.band_hi, 1e-8);
    }
    return std::sqrt(std::max(total, 0.0));
}

QuadratureNorm halfspace_norm_quadrature(
    const std::function<Complex(int, double, double)>& sampler,
    int j, double band_lo, double band_hi, const QuadratureGrid& grid) {
    if (grid.n_eta < 3 || grid.n_x2 < 3 || grid.n_eta % 2 == 0 ||
        grid.n_x2 % 2 == 0 || !(grid.x2_max > 0.0)) {
        throw std::invalid_argument(
            "halfspace_norm_quadrature: grid needs odd point counts >= 3 and "
            "x2_max > 0");
    }
    const double d_eta = (band_hi - band_lo) / (grid.n_eta - 1);
    const double d_x2 = grid.x2_max / (grid.n_x2 - 1);
    // composite Simpson weights h/3 * (1,4,2,...,2,4,1)
    auto simpson_w = [](int k, int n, double h) {
        if (k == 0 || k == n - 1) return h / 3.0;
        return (k % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    };
    double total = 0.0;
    double tail = 0.0;
    for (int s = 0; s <= j; ++s) {
        for (int ke = 0; ke < grid.n_eta; ++ke) {
            const double eta = band_lo + ke * d_eta;
            const double we = simpson_w(ke, grid.n_eta, d_eta);
            const double spectral_w = std::pow(1.0 + eta * eta, j - s);
            double inner = 0.0;
            for (int kx = 0; kx < grid.n_x2; ++kx) {
                const double x2 = kx * d_x2;
                const double wx = simpson_w(kx, grid.n_x2, d_x2);
                const double contrib = wx * std::norm(sampler(s, eta, x2));
                inner += contrib;
                if (kx == grid.n_x2 - 1) tail += we * spectral_w * contrib;
            }
            total += we * spectral_w * inner;
        }
    }
    QuadratureNorm out;
    out.norm = std::sqrt(std::max(total, 0.0));
    out.tail_estimate = std::sqrt(tail);
    out.truncation_warning =
        out.tail_estimate > 1e-9 * std::max(out.norm, 1e-300);
    return out;
}

double combined_norm(double f, double h, double v, double g) {
    return f + h + v + g;
}

}  // namespace khi
