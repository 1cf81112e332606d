#include "khi/hadamard.hpp"

#include <cmath>
#include <stdexcept>

#include "khi/quadrature.hpp"

namespace khi {

namespace {

constexpr double kLn10 = 2.302585092994045684;

double bump_base(double eta, int n) {
    const double t = 2.0 * (eta - n) - 1.0;
    if (!(t > -1.0 && t < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

// norm = sqrt(scaled * e^{log_shift}); saturates to inf past double range
NormValue make_norm(double scaled, double log_shift) {
    NormValue out;
    if (!(scaled > 0.0)) return out;
    const double l = 0.5 * (std::log(scaled) + log_shift);
    out.log10 = l / kLn10;
    out.value = (l < 700.0) ? std::exp(l)
                            : std::numeric_limits<double>::infinity();
    return out;
}

// sum over s <= jj of (1+eta^2)^{jj-s} |coef|^2 |mu|^{2s} / (2 Re mu)
double profile_energy(const ExponentialProfile& p, double eta, int jj) {
    const double re = p.decay.real();
    if (!(re > 0.0)) {
        throw std::domain_error(
            "profile_energy: Re(decay) <= 0 at eta = " + std::to_string(eta));
    }
    const double mu2 = std::norm(p.decay);
    const double base = 1.0 + eta * eta;
    double total = 0.0;
    double factor = std::pow(base, jj);
    for (int s = 0; s <= jj; ++s) {
        total += factor;
        factor *= mu2 / base;
    }
    return total * std::norm(p.coefficient) / (2.0 * re);
}

}  // namespace

double BumpProfile::amplitude(double eta) const {
    return scale * bump_base(eta, n);
}

BumpProfile make_bump(int n, int j, double cbar_j) {
    if (n < 1) throw std::invalid_argument("make_bump: n >= 1 required");
    if (j < 0) throw std::invalid_argument("make_bump: j >= 0 required");
    if (!(cbar_j > 0.0))
        throw std::invalid_argument("make_bump: cbar_j > 0 required");
    BumpProfile bump;
    bump.n = n;
    bump.j = j;
    bump.cbar_j = cbar_j;
    const double i0 = integrate(
        [&](double eta) {
            const double b = bump_base(eta, n);
            return std::pow(1.0 + eta * eta, j + 1) * b * b;
        },
        n, n + 1.0, 1e-12);
    bump.scale = 1.0 / (cbar_j * n * std::sqrt(i0));
    return bump;
}

double SequenceNorms::combined_log10() const {
    const double logs[4] = {f.log10, h.log10, v.log10, g.log10};
    double m = logs[0];
    for (double l : logs) m = std::max(m, l);
    if (!std::isfinite(m)) return m;
    double sum = 0.0;
    for (double l : logs) sum += std::pow(10.0, l - m);
    return m + std::log10(sum);
}

SequenceNorms sequence_norms(const BackgroundState& state,
                             const BumpProfile& bump, int sobolev_index,
                             double t) {
    if (sobolev_index < 0)
        throw std::invalid_argument("sequence_norms: sobolev index >= 0");
    const SymbolRoots roots = quartic_roots(state);
    if (!roots.has_x1) {
        throw std::domain_error(
            "sequence_norms: background has no unstable root");
    }
    const int jj = sobolev_index;
    const double n = bump.n;
    // factor the growth weight at mid-band out of every integral; the
    // remaining factor spans only e^{+-X1 t} on the support
    if (roots.x1 * std::abs(t) > 700.0) {
        throw std::domain_error(
            "sequence_norms: X1*t = " + std::to_string(roots.x1 * t) +
            " too large for in-band double arithmetic");
    }
    const double mid = n + 0.5;
    const double log_shift = 2.0 * roots.x1 * mid * t;
    auto weight = [&](double eta) {
        return std::exp(2.0 * roots.x1 * (eta - mid) * t);
    };
    auto band_integral = [&](const std::function<double(double)>& f) {
        return integrate(f, n, n + 1.0, 1e-9);
    };

    SequenceNorms out;
    out.f = make_norm(
        band_integral([&](double eta) {
            const double chi = bump.amplitude(eta);
            return std::pow(1.0 + eta * eta, jj) * chi * chi * weight(eta);
        }),
        log_shift);
    out.h = make_norm(
        band_integral([&](double eta) {
            const NormalMode mode =
                build_mode_on_shell(state, eta, bump.amplitude(eta));
            double e = 0.0;
            for (int side = 0; side < 2; ++side)
                e += profile_energy(mode.m_hat[side], eta, jj);
            return e * weight(eta);
        }),
        log_shift);
    out.v = make_norm(
        band_integral([&](double eta) {
            const NormalMode mode =
                build_mode_on_shell(state, eta, bump.amplitude(eta));
            double e = 0.0;
            for (int side = 0; side < 2; ++side) {
                e += profile_energy(mode.w1_hat[side], eta, jj);
                e += profile_energy(mode.w2_hat[side], eta, jj);
            }
            return e * weight(eta);
        }),
        log_shift);
    out.g = make_norm(
        band_integral([&](double eta) {
            const NormalMode mode =
                build_mode_on_shell(state, eta, bump.amplitude(eta));
            double e = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int l = 0; l < 2; ++l)
                    for (int side = 0; side < 2; ++side)
                        e += profile_energy(mode.e_hat[i][l][side], eta, jj);
            return e * weight(eta);
        }),
        log_shift);
    return out;
}

namespace {

// slack in decades for the strict analytic inequalities
constexpr double kLogSlack = 1e-6;

void require_le(double lhs_log10, double rhs_log10, const char* what) {
    if (lhs_log10 > rhs_log10 + kLogSlack) {
        throw std::runtime_error(std::string("hadamard: bound violated: ") +
                                 what);
    }
}

}  // namespace

SequenceNorms sequence_initial_norms(const BackgroundState& state, int n,
                                     int j, double cbar_j) {
    const SequenceNorms norms =
        sequence_norms(state, make_bump(n, j, cbar_j), j, 0.0);
    const InitialBounds b = initial_norm_bounds(state, n, j, cbar_j);
    require_le(norms.f.log10, std::log10(b.f), "initial f-norm");
    require_le(norms.h.log10, std::log10(b.h), "initial h-norm");
    require_le(norms.v.log10, std::log10(b.v), "initial v-norm");
    if (state.g_sq() > 0.0)
        require_le(norms.g.log10, std::log10(b.g), "initial G-norm");
    return norms;
}

InitialBounds initial_norm_bounds(const BackgroundState& state, int n, int j,
                                  double cbar_j) {
    if (n < 1) throw std::invalid_argument("initial_norm_bounds: n >= 1");
    const BoundConstants bc = bound_constants(state);
    const double s = 4.0 * bc.c_star * (j + 1) / (cbar_j * cbar_j * n * n);
    InitialBounds out;
    out.f = 1.0 / (cbar_j * n);
    out.h = std::sqrt(s);
    out.v = 2.0 * state.c * bc.c2 * std::sqrt(s);
    out.g = state.c * bc.c2 * std::sqrt(2.0 * state.g_sq() * bc.c3 * s);
    return out;
}

SequenceNorms sequence_grown_norms(const BackgroundState& state, int n, int k,
                                   double t, int j, double cbar_j) {
    if (k < 0) throw std::invalid_argument("sequence_grown_norms: k >= 0");
    const SequenceNorms norms =
        sequence_norms(state, make_bump(n, j, cbar_j), k, t);
    // lower bounds against the spectral-weight integral I_k = f^2
    const BoundConstants bc = bound_constants(state);
    const double log_ik = 2.0 * norms.f.log10;
    const double K = state.elastic_number();
    require_le(std::log10(bc.c1) + log_ik, 2.0 * norms.h.log10,
               "grown h-norm lower bound");
    require_le(std::log10((K * K + 2.0) * state.c * state.c * bc.c1 / 8.0) +
                   log_ik,
               2.0 * norms.v.log10, "grown v-norm lower bound");
    if (state.g_sq() > 0.0) {
        require_le(std::log10(state.g_sq() * bc.c1 / 4.0) + log_ik,
                   2.0 * norms.g.log10, "grown G-norm lower bound");
    }
    return norms;
}

long find_n_star(const BackgroundState& state, double alpha, double t0, int j,
                 int k, double cbar_j) {
    if (!(alpha > 0.0)) throw std::invalid_argument("find_n_star: alpha > 0");
    if (!(t0 > 0.0)) throw std::invalid_argument("find_n_star: t0 > 0");
    if (k < 0 || j < k)
        throw std::invalid_argument("find_n_star: 0 <= k <= j required");
    if (!(cbar_j > 0.0))
        throw std::invalid_argument("find_n_star: cbar_j > 0");
    const SymbolRoots roots = quartic_roots(state);
    if (!roots.has_x1) {
        throw std::domain_error("find_n_star: background has no unstable root");
    }
    const double x1 = roots.x1;
    const double p = j - k + 1;
    for (long n = 1; n <= 100000000L; ++n) {
        const double np1 = static_cast<double>(n) + 1.0;
        const double lhs =
            2.0 * x1 * n * t0 - p * std::log1p(np1 * np1);
        const double rhs =
            2.0 * (std::log(alpha) + std::log(cbar_j) + std::log(double(n)));
        if (lhs >= rhs) return n;
    }
    throw std::runtime_error("find_n_star: no n found below 1e8");
}

std::vector<IllposednessRow> illposedness_table(const BackgroundState& state,
                                                int j, int k, double t0,
                                                const std::vector<int>& n_list,
                                                double cbar_j) {
    if (k < 0 || j < k)
        throw std::invalid_argument("illposedness_table: 0 <= k <= j required");
    std::vector<IllposednessRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        const BumpProfile bump = make_bump(n, j, cbar_j);
        IllposednessRow row;
        row.n = n;
        row.initial = sequence_norms(state, bump, j, 0.0);
        row.grown = sequence_norms(state, bump, k, t0);
        row.log10_ratio =
            row.grown.combined_log10() - row.initial.combined_log10();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace khi
