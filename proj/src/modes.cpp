#include "khi/modes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace khi {

namespace {

constexpr int kUpper = 0;
constexpr int kLower = 1;

double side_sign(int side_index) { return side_index == kUpper ? 1.0 : -1.0; }

struct SideData {
    Complex shifted;  // tau + i*v1_side*eta
    Complex denom;    // shifted^2 + G^2 eta^2
    Complex mu;       // decay rate of this side
    double g1j[2];    // side-local G11, G12
};

SideData side_data(const BackgroundState& s, double eta, Complex tau,
                   const MuPair& m, int side_index) {
    const double sg = side_sign(side_index);
    SideData d;
    d.shifted = tau + Complex(0.0, sg * s.v1_plus * eta);
    d.denom = d.shifted * d.shifted + s.g_sq() * eta * eta;
    d.mu = side_index == kUpper ? m.mu_plus : m.mu_minus;
    d.g1j[0] = sg * s.g11_plus;
    d.g1j[1] = sg * s.g12_plus;
    return d;
}

void require_denominators(const BackgroundState& s, double eta,
                          const SideData& d, int side_index,
                          bool need_shifted) {
    const double c2 = s.c * s.c;
    const double denom_floor = 1e-12 * eta * eta * eta * eta * c2 * c2;
    if (std::abs(d.denom) < std::max(denom_floor, 1e-300)) {
        throw std::domain_error(
            std::string("modes: singular denominator (tau +- i v1 eta)^2 + "
                        "G^2 eta^2 on the ") +
            (side_index == kUpper ? "upper" : "lower") + " side");
    }
    if (need_shifted && std::abs(d.shifted) <
                            1e-12 * (std::abs(eta) * s.c + 1e-300)) {
        throw std::domain_error(
            std::string("modes: vanishing tau +- i v1 eta on the ") +
            (side_index == kUpper ? "upper" : "lower") + " side");
    }
}

}  // namespace

void build_pressure(const BackgroundState& state, double eta, Complex tau,
                    Complex g_hat, NormalMode& mode) {
    FrequencyPoint p{tau, eta};
    const MuPair m = mu_pair(state, p);  // throws outside Xi
    mode.eta = eta;
    mode.tau = tau;
    mode.g_hat = g_hat;
    const Complex coef = Complex(0.0, 4.0 * state.v1_plus * eta) * tau *
                         g_hat /
                         (state.c * state.c * (m.mu_plus + m.mu_minus));
    mode.m_hat[kUpper] = {coef, m.mu_plus, +1};
    mode.m_hat[kLower] = {coef, m.mu_minus, -1};
}

void build_velocity(const BackgroundState& state, double eta, Complex tau,
                    Complex g_hat, NormalMode& mode) {
    FrequencyPoint p{tau, eta};
    const MuPair m = mu_pair(state, p);
    const Complex dmu = m.mu_plus - m.mu_minus;
    const double c2 = state.c * state.c;
    for (int side : {kUpper, kLower}) {
        const SideData d = side_data(state, eta, tau, m, side);
        require_denominators(state, eta, d, side, false);
        const Complex common = dmu * c2 * d.shifted / d.denom * g_hat;
        mode.w1_hat[side] = {-Complex(0.0, eta) * common, d.mu,
                             side == kUpper ? +1 : -1};
        const double w2_sign = side == kUpper ? 1.0 : -1.0;
        mode.w2_hat[side] = {w2_sign * d.mu * common, d.mu,
                             side == kUpper ? +1 : -1};
    }
    mode.eta = eta;
    mode.tau = tau;
    mode.g_hat = g_hat;
}

void build_deformation(const BackgroundState& state, double eta, Complex tau,
                       Complex g_hat, NormalMode& mode) {
    FrequencyPoint p{tau, eta};
    const MuPair m = mu_pair(state, p);
    for (int side : {kUpper, kLower}) {
        const SideData d = side_data(state, eta, tau, m, side);
        require_denominators(state, eta, d, side, true);
        // E_ij = i G1j eta w_i / (tau +- i v1 eta), same decay as w_i
        for (int j = 0; j < 2; ++j) {
            const Complex factor =
                Complex(0.0, d.g1j[j] * eta) / d.shifted;
            mode.e_hat[0][j][side] = mode.w1_hat[side];
            mode.e_hat[0][j][side].coefficient *= factor;
            mode.e_hat[1][j][side] = mode.w2_hat[side];
            mode.e_hat[1][j][side].coefficient *= factor;
        }
    }
}

NormalMode build_mode(const BackgroundState& state, double eta, Complex tau,
                      Complex g_hat) {
    NormalMode mode;
    build_pressure(state, eta, tau, g_hat, mode);
    build_velocity(state, eta, tau, g_hat, mode);
    build_deformation(state, eta, tau, g_hat, mode);
    return mode;
}

NormalMode build_mode_on_shell(const BackgroundState& state, double eta,
                               Complex g_hat) {
    const double rate = growth_rate(state, eta);  // throws outside window
    return build_mode(state, eta, Complex(rate, 0.0), g_hat);
}

namespace {

// |sum of terms| / (sum of |terms|), so exact cancellation reads ~1e-16
double rel_residual(std::initializer_list<Complex> terms) {
    Complex sum = 0.0;
    double scale = 0.0;
    for (const Complex& t : terms) {
        sum += t;
        scale += std::abs(t);
    }
    return scale > 0.0 ? std::abs(sum) / scale : 0.0;
}

}  // namespace

double interior_residual(const BackgroundState& state, const NormalMode& mode,
                         const std::vector<double>& sample_x2) {
    const double eta = mode.eta;
    const Complex tau = mode.tau;
    const double c2 = state.c * state.c;
    const Complex ieta(0.0, eta);
    double worst = 0.0;
    for (int side : {kUpper, kLower}) {
        const double sg = side_sign(side);
        const Complex shifted = tau + Complex(0.0, sg * state.v1_plus * eta);
        const double g1j[2] = {sg * state.g11_plus, sg * state.g12_plus};
        for (double x2_raw : sample_x2) {
            const double x2 = side == kUpper ? std::abs(x2_raw)
                                             : -std::abs(x2_raw);
            const Complex m = mode.m_hat[side].value(x2);
            const Complex dm = mode.m_hat[side].derivative(1, x2);
            const Complex d2m = mode.m_hat[side].derivative(2, x2);
            const Complex w1 = mode.w1_hat[side].value(x2);
            const Complex w2 = mode.w2_hat[side].value(x2);
            const Complex dw2 = mode.w2_hat[side].derivative(1, x2);
            Complex e[2][2];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    e[i][j] = mode.e_hat[i][j][side].value(x2);

            worst = std::max(worst, rel_residual({shifted * m, ieta * w1, dw2}));
            worst = std::max(worst,
                             rel_residual({shifted * w1, c2 * ieta * m,
                                           -ieta * (g1j[0] * e[0][0] +
                                                    g1j[1] * e[0][1])}));
            worst = std::max(worst,
                             rel_residual({shifted * w2, c2 * dm,
                                           -ieta * (g1j[0] * e[1][0] +
                                                    g1j[1] * e[1][1])}));
            for (int i = 0; i < 2; ++i) {
                const Complex w_i = i == 0 ? w1 : w2;
                for (int j = 0; j < 2; ++j) {
                    worst = std::max(
                        worst, rel_residual({shifted * e[i][j],
                                             -Complex(0.0, g1j[j] * eta) * w_i}));
                }
            }
            worst = std::max(
                worst, rel_residual({shifted * shifted * m, c2 * eta * eta * m,
                                     -c2 * d2m, state.g_sq() * eta * eta * m}));
        }
    }
    return worst;
}

double BoundaryResiduals::max() const {
    double m = std::max({pressure_continuity, pressure_derivative_jump,
                         kinematic, velocity_jump});
    for (int j = 0; j < 2; ++j)
        for (int s = 0; s < 2; ++s) m = std::max(m, deformation_bc[j][s]);
    return m;
}

BoundaryResiduals boundary_residuals(const BackgroundState& state,
                                     const NormalMode& mode) {
    const double eta = mode.eta;
    const Complex tau = mode.tau;
    const double v1 = state.v1_plus;
    const double c2 = state.c * state.c;
    BoundaryResiduals r;
    r.pressure_continuity = rel_residual(
        {mode.m_hat[kUpper].value(0.0), -mode.m_hat[kLower].value(0.0)});
    r.pressure_derivative_jump =
        rel_residual({c2 * mode.m_hat[kUpper].derivative(1, 0.0),
                      -c2 * mode.m_hat[kLower].derivative(1, 0.0),
                      Complex(0.0, 4.0 * v1 * eta) * tau * mode.g_hat});
    r.kinematic = rel_residual(
        {mode.w2_hat[kUpper].value(0.0),
         -(tau + Complex(0.0, v1 * eta)) * mode.g_hat});
    r.velocity_jump = rel_residual({mode.w2_hat[kUpper].value(0.0),
                                    -mode.w2_hat[kLower].value(0.0),
                                    -Complex(0.0, 2.0 * v1 * eta) * mode.g_hat});
    for (int j = 0; j < 2; ++j) {
        for (int side : {kUpper, kLower}) {
            const double g = side_sign(side) * (j == 0 ? state.g11_plus
                                                       : state.g12_plus);
            r.deformation_bc[j][side] =
                rel_residual({mode.e_hat[1][j][side].value(0.0),
                              -Complex(0.0, g * eta) * mode.g_hat});
        }
    }
    return r;
}

Complex front_symbol_residual(const BackgroundState& state, double eta,
                              Complex tau, Complex g_hat) {
    if (g_hat == Complex(0.0)) return Complex(0.0);
    return symbol_direct(state, FrequencyPoint{tau, eta}) * g_hat;
}

Field2D synthesize_physical(const ModeSpec& request, FieldId field, double t,
                            const std::vector<double>& x1,
                            const std::vector<double>& x2) {
    if (!(request.band_hi > request.band_lo)) {
        throw std::invalid_argument("synthesize_physical: empty eta band");
    }
    if (x1.empty() || (field != FieldId::Front && x2.empty())) {
        throw std::invalid_argument("synthesize_physical: empty grid");
    }
    const int n_eta = std::max(
        2, static_cast<int>(std::ceil(request.points_per_unit *
                                      (request.band_hi - request.band_lo))) + 1);
    const double d_eta = (request.band_hi - request.band_lo) / (n_eta - 1);

    struct Sample {
        double eta;
        double weight;
        double growth;  // X1 * eta
        NormalMode mode;
    };
    std::vector<Sample> samples;
    samples.reserve(n_eta);
    const double x1_rate = quartic_roots(request.state).x1;
    for (int k = 0; k < n_eta; ++k) {
        const double eta = request.band_lo + k * d_eta;
        const double amp = request.chi(eta);
        const double w = (k == 0 || k == n_eta - 1) ? 0.5 * d_eta : d_eta;
        Sample s;
        s.eta = eta;
        s.weight = w;
        s.growth = x1_rate * eta;
        if (amp != 0.0) {
            s.mode = build_mode(request.state, eta, Complex(s.growth, 0.0),
                                Complex(amp, 0.0));
        } else {
            s.mode.eta = eta;
            s.mode.g_hat = 0.0;
        }
        samples.push_back(std::move(s));
    }

    Field2D out;
    out.x1 = x1;
    out.x2 = field == FieldId::Front ? std::vector<double>{0.0} : x2;
    out.values.assign(out.x1.size() * out.x2.size(), 0.0);
    const double prefactor = 1.0 / (4.0 * M_PI * M_PI);

    auto profile_value = [&](const Sample& s, double depth) -> Complex {
        if (s.mode.g_hat == Complex(0.0)) return Complex(0.0);
        const int side = depth >= 0.0 ? kUpper : kLower;
        switch (field) {
            case FieldId::Front: return s.mode.g_hat;
            case FieldId::H: return s.mode.m_hat[side].value(depth);
            case FieldId::W1: return s.mode.w1_hat[side].value(depth);
            case FieldId::W2: return s.mode.w2_hat[side].value(depth);
            case FieldId::E11: return s.mode.e_hat[0][0][side].value(depth);
            case FieldId::E21: return s.mode.e_hat[1][0][side].value(depth);
            case FieldId::E12: return s.mode.e_hat[0][1][side].value(depth);
            case FieldId::E22: return s.mode.e_hat[1][1][side].value(depth);
        }
        return Complex(0.0);
    };

    for (size_t i1 = 0; i1 < out.x1.size(); ++i1) {
        for (size_t i2 = 0; i2 < out.x2.size(); ++i2) {
            Complex acc = 0.0;
            for (const Sample& s : samples) {
                if (s.mode.g_hat == Complex(0.0) && field == FieldId::Front)
                    continue;
                const Complex osc =
                    std::exp(Complex(s.growth * t, s.eta * out.x1[i1]));
                acc += s.weight * osc * profile_value(s, out.x2[i2]);
            }
            out.values[i1 * out.x2.size() + i2] = (prefactor * acc).real();
        }
    }
    return out;
}

}  // namespace khi
