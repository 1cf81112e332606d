#include "khi/dispersion.hpp"

#include <cmath>
#include <stdexcept>

namespace khi {

Complex complex_sqrt_halfplane(Complex z) {
    const double a = z.real();
    const double b = z.imag();
    const double r = std::abs(z);
    const double sign_b = (b >= 0.0) ? 1.0 : -1.0;
    const double re = std::sqrt(std::max(0.5 * (r + a), 0.0));
    const double im = std::sqrt(std::max(0.5 * (r - a), 0.0));
    return Complex(re, sign_b * im);
}

namespace {

void require_in_xi(const FrequencyPoint& p, const char* op) {
    if (!p.in_xi()) {
        throw std::domain_error(std::string(op) +
                                ": frequency point outside Xi (Re tau = " +
                                std::to_string(p.tau.real()) + ")");
    }
}

// radicand of mu for the given side sign (+1 upper, -1 lower)
Complex mu_radicand(const BackgroundState& s, Complex tau, double eta,
                    double side) {
    const Complex shifted = tau + Complex(0.0, side * s.v1_plus * eta);
    return (shifted * shifted + s.g_sq() * eta * eta) / (s.c * s.c) +
           eta * eta;
}

}  // namespace

MuPair mu_pair(const BackgroundState& state, const FrequencyPoint& p) {
    require_in_xi(p, "mu_pair");
    const Complex zp = mu_radicand(state, p.tau, p.eta, +1.0);
    const Complex zm = mu_radicand(state, p.tau, p.eta, -1.0);
    MuPair m;
    m.mu_plus = complex_sqrt_halfplane(zp);
    m.mu_minus = complex_sqrt_halfplane(zm);
    m.a = zp.real();
    m.b = zp.imag();
    m.r = std::abs(zp);
    return m;
}

Complex symbol_direct(const BackgroundState& state, const FrequencyPoint& p) {
    require_in_xi(p, "symbol_direct");
    const Complex tau = p.tau;
    const double eta = p.eta;
    const double v1 = state.v1_plus;
    const MuPair m = mu_pair(state, p);
    const Complex ratio =
        (m.mu_plus - m.mu_minus) / (m.mu_plus + m.mu_minus);
    return tau * tau - v1 * v1 * eta * eta -
           Complex(0.0, 2.0 * v1 * eta) * tau * ratio +
           state.g_sq() * eta * eta;
}

Complex symbol_reduced(const BackgroundState& state, const FrequencyPoint& p) {
    require_in_xi(p, "symbol_reduced");
    const MuPair m = mu_pair(state, p);
    return state.c * state.c *
           (m.mu_plus * m.mu_minus - p.eta * p.eta);
}

SymbolRoots quartic_roots(const BackgroundState& state) {
    const double v2 = state.v1_plus * state.v1_plus;
    const double g2 = state.g_sq();
    const double c2 = state.c * state.c;
    const double disc = std::sqrt(c2 * c2 + 4.0 * (g2 + c2) * v2);
    SymbolRoots r;
    r.x1_sq = disc - v2 - g2 - c2;
    r.x2_sq = -disc - v2 - g2 - c2;
    r.lambda = r.x1_sq;
    r.has_x1 = r.x1_sq >= 0.0;
    r.x1 = r.has_x1 ? std::sqrt(r.x1_sq) : 0.0;
    r.y2 = std::sqrt(-r.x2_sq);
    return r;
}

double growth_rate(const BackgroundState& state, double eta) {
    const SymbolRoots roots = quartic_roots(state);
    if (!(roots.x1_sq > 0.0)) {
        throw std::domain_error(
            "growth_rate: no unstable root (speed outside the open window, "
            "x1_sq = " + std::to_string(roots.x1_sq) + ")");
    }
    return roots.x1 * std::abs(eta);
}

namespace {

// phi(X) = mu~+ mu~- - 1, real on the real axis
Complex phi_of_x(const BackgroundState& s, Complex x) {
    const double c2 = s.c * s.c;
    const Complex zp =
        ((x + Complex(0.0, s.v1_plus)) * (x + Complex(0.0, s.v1_plus)) +
         s.g_sq()) / c2 + 1.0;
    const Complex zm =
        ((x - Complex(0.0, s.v1_plus)) * (x - Complex(0.0, s.v1_plus)) +
         s.g_sq()) / c2 + 1.0;
    return complex_sqrt_halfplane(zp) * complex_sqrt_halfplane(zm) - 1.0;
}

}  // namespace

SimpleRootCheck check_simple_root(const BackgroundState& state, double eta) {
    const SymbolRoots roots = quartic_roots(state);
    if (!(roots.x1_sq > 0.0)) {
        throw std::domain_error("check_simple_root: speed outside the open window");
    }
    if (eta == 0.0) {
        throw std::domain_error("check_simple_root: eta must be nonzero");
    }
    const double x1 = roots.x1;
    SimpleRootCheck out;
    out.phi_value = phi_of_x(state, x1).real();
    const double h = 1e-6 * std::max(1.0, std::abs(x1));
    out.dphi_dx =
        (phi_of_x(state, x1 + h).real() - phi_of_x(state, x1 - h).real()) /
        (2.0 * h);
    return out;
}

X2ExclusionReport verify_x2_excluded(const BackgroundState& state) {
    const SymbolRoots roots = quartic_roots(state);
    X2ExclusionReport rep;
    rep.y2 = roots.y2;
    // evaluate just off the imaginary axis; on it Re(tau) = 0 and the point
    // is outside Xi
    const Complex x_off(1e-8, rep.y2);
    rep.mu_product = phi_of_x(state, x_off) + 1.0;
    rep.distance_to_minus_one = std::abs(rep.mu_product - Complex(-1.0));
    rep.tau_in_xi = false;
    return rep;
}

BoundConstants bound_constants(const BackgroundState& state) {
    const double K = state.elastic_number();
    const double M = state.mach_number();
    const double e0 = state.eps0;
    if (!(M >= K + e0 && M <= std::sqrt(K * K + 2.0) - e0)) {
        throw std::domain_error(
            "bound_constants: M = " + std::to_string(M) +
            " outside [K+eps0, sqrt(K^2+2)-eps0]");
    }
    const double c = state.c;
    const double z0 = std::sqrt(1.0 + 4.0 * (K * K + 1.0) * (K + e0) * (K + e0));

    BoundConstants b;
    b.c1 = 2.0 - 2.0 * (z0 - 2.0 * (K + e0) * (K + e0));

    const double su = std::sqrt(K * K + 2.0);
    const double inner = std::sqrt((2.0 * K * K + 3.0) * (2.0 * K * K + 3.0) -
                                   4.0 * (K * K + 1.0) * e0 * (2.0 * su - e0));
    b.c_star = 1.0 / (std::sqrt(2.0) *
                      std::sqrt(1.0 + inner - 2.0 * (su - e0) * (su - e0)));

    const double num = z0 - K * K - 1.0;
    const double den = num * num +
                       2.0 * K * K * (z0 - 2.0 * (K + e0) * (K + e0) - K * K - 1.0) +
                       K * K * K * K;
    b.c2 = std::sqrt(num / den);

    b.c3 = 1.0 / (c * c * num);
    return b;
}

}  // namespace khi
