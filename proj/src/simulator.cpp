#include "khi/simulator.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace khi {

void Grid1D::validate() const {
    if (!(L > 0.0)) {
        throw std::invalid_argument("Grid1D: L must be positive, got " +
                                    std::to_string(L));
    }
    if (N < 16) {
        throw std::invalid_argument("Grid1D: N >= 16 required, got " +
                                    std::to_string(N));
    }
}

int SimState::index(int side, SimField f, int node) const {
    const int n = grid.N;
    return side * kSimFields * n + static_cast<int>(f) * n + node;
}

Complex& SimState::at(int side, SimField f, int node) {
    return data[index(side, f, node)];
}

Complex SimState::at(int side, SimField f, int node) const {
    return data[index(side, f, node)];
}

SimState SimState::zero(double eta, const Grid1D& grid) {
    grid.validate();
    SimState s;
    s.eta = eta;
    s.grid = grid;
    s.data = Eigen::VectorXcd::Zero(2 * kSimFields * grid.N + 1);
    return s;
}

SimState SimState::from_mode(const NormalMode& mode, const Grid1D& grid) {
    SimState s = zero(mode.eta, grid);
    const double h = grid.spacing();
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? 1.0 : -1.0;
        for (int i = 0; i < grid.N; ++i) {
            const double x2 = sgn * i * h;
            s.at(side, SimField::H, i) = mode.m_hat[side].value(x2);
            s.at(side, SimField::W1, i) = mode.w1_hat[side].value(x2);
            s.at(side, SimField::W2, i) = mode.w2_hat[side].value(x2);
            s.at(side, SimField::E11, i) = mode.e_hat[0][0][side].value(x2);
            s.at(side, SimField::E21, i) = mode.e_hat[1][0][side].value(x2);
            s.at(side, SimField::E12, i) = mode.e_hat[0][1][side].value(x2);
            s.at(side, SimField::E22, i) = mode.e_hat[1][1][side].value(x2);
        }
    }
    s.g_hat() = mode.g_hat;
    return s;
}

namespace {

using Row = std::vector<std::pair<int, Complex>>;

// d/d(node index) to fourth order; scale by +-1/h for d/dx2 per side
void index_derivative_stencil(int i, int n, Row& out, int base,
                              Complex scale) {
    auto add = [&](int node, double coef) {
        out.emplace_back(base + node, scale * (coef / 12.0));
    };
    if (i == 0) {
        add(0, -25.0); add(1, 48.0); add(2, -36.0); add(3, 16.0); add(4, -3.0);
    } else if (i == 1) {
        add(0, -3.0); add(1, -10.0); add(2, 18.0); add(3, -6.0); add(4, 1.0);
    } else if (i == n - 2) {
        add(n - 1, 3.0); add(n - 2, 10.0); add(n - 3, -18.0);
        add(n - 4, 6.0); add(n - 5, -1.0);
    } else if (i == n - 1) {
        add(n - 1, 25.0); add(n - 2, -48.0); add(n - 3, 36.0);
        add(n - 4, -16.0); add(n - 5, 3.0);
    } else {
        add(i - 2, 1.0); add(i - 1, -8.0); add(i + 1, 8.0); add(i + 2, -1.0);
    }
}

}  // namespace

Generator assemble_generator(const BackgroundState& state, double eta,
                             const Grid1D& grid) {
    grid.validate();
    state.validate();
    const int n = grid.N;
    const double h = grid.spacing();
    const int dim = 2 * kSimFields * n + 1;
    const int g_row = dim - 1;
    const Complex i_unit(0.0, 1.0);
    const double c2 = state.c * state.c;

    auto idx = [n](int side, SimField f, int node) {
        return side * kSimFields * n + static_cast<int>(f) * n + node;
    };

    std::vector<Row> rows(dim);
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? 1.0 : -1.0;
        const double v = state.v1(side == 0 ? +1 : -1);
        const double g11 = state.g1j(side == 0 ? +1 : -1, 1);
        const double g12 = state.g1j(side == 0 ? +1 : -1, 2);
        const Complex adv = -i_unit * v * eta;      // advection phase
        const Complex dscale = sgn / h;             // d/dx2 per side
        for (int i = 0; i < n; ++i) {
            // mass
            Row& rh = rows[idx(side, SimField::H, i)];
            rh.emplace_back(idx(side, SimField::H, i), adv);
            rh.emplace_back(idx(side, SimField::W1, i), -i_unit * eta);
            index_derivative_stencil(i, n, rh, idx(side, SimField::W2, 0),
                                     -dscale);
            // horizontal momentum
            Row& r1 = rows[idx(side, SimField::W1, i)];
            r1.emplace_back(idx(side, SimField::W1, i), adv);
            r1.emplace_back(idx(side, SimField::H, i), -i_unit * c2 * eta);
            r1.emplace_back(idx(side, SimField::E11, i), i_unit * eta * g11);
            r1.emplace_back(idx(side, SimField::E12, i), i_unit * eta * g12);
            // vertical momentum
            Row& r2 = rows[idx(side, SimField::W2, i)];
            r2.emplace_back(idx(side, SimField::W2, i), adv);
            index_derivative_stencil(i, n, r2, idx(side, SimField::H, 0),
                                     -c2 * dscale);
            r2.emplace_back(idx(side, SimField::E21, i), i_unit * eta * g11);
            r2.emplace_back(idx(side, SimField::E22, i), i_unit * eta * g12);
            // deformation transport
            const SimField ef[2][2] = {{SimField::E11, SimField::E12},
                                       {SimField::E21, SimField::E22}};
            const SimField wf[2] = {SimField::W1, SimField::W2};
            const double gcol[2] = {g11, g12};
            for (int fi = 0; fi < 2; ++fi) {
                for (int fj = 0; fj < 2; ++fj) {
                    Row& re = rows[idx(side, ef[fi][fj], i)];
                    re.emplace_back(idx(side, ef[fi][fj], i), adv);
                    re.emplace_back(idx(side, wf[fi], i),
                                    i_unit * eta * gcol[fj]);
                }
            }
        }
    }
    // Outer edge: radiation closure for the (h, w2) wave pair. The outgoing
    // characteristic keeps its one-sided PDE row, the incoming one is frozen
    // (d/dt = 0), so nothing reflects:
    //   upper, outgoing c h + w2:  h' = P/(2c), w2' = P/2
    //   lower, outgoing c h - w2:  h' = P/(2c), w2' = -P/2
    // Leaving the edge free instead (pure extrapolation closures) fills the
    // right half-plane with spurious eigenvalues.
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? 1.0 : -1.0;
        Row& rh = rows[idx(side, SimField::H, n - 1)];
        Row& rw = rows[idx(side, SimField::W2, n - 1)];
        Row outgoing;
        for (const auto& [col, coef] : rh)
            outgoing.emplace_back(col, state.c * coef);
        for (const auto& [col, coef] : rw)
            outgoing.emplace_back(col, sgn * coef);
        rh.clear();
        rw.clear();
        for (const auto& [col, coef] : outgoing) {
            rh.emplace_back(col, coef / (2.0 * state.c));
            rw.emplace_back(col, sgn * 0.5 * coef);
        }
    }

    // front: d g / dt = w2+(0) - i v1+ eta g
    rows[g_row].emplace_back(idx(0, SimField::W2, 0), Complex(1.0, 0.0));
    rows[g_row].emplace_back(g_row, -i_unit * state.v1_plus * eta);

    // Interface: each side owns one outgoing characteristic of its
    // (h, w2) wave pair -- c h - w2 from above, c h + w2 from below. Those
    // two one-sided rows plus the two jump constraints
    // (h+ = h-, w2+ - w2- = 2 i v1+ eta g) determine all four interface
    // time derivatives:
    //   a := d/dt (c h+ - w2+),  b := d/dt (c h- + w2-),  J := 2 i v1+ eta g'
    //   h+' = h-' = (a + b + J) / (2c)
    //   w2+' = (b - a + J) / 2,  w2-' = (b - a - J) / 2
    {
        auto combine = [](std::initializer_list<std::pair<const Row*, Complex>>
                              parts) {
            Row out;
            for (const auto& [row, scale] : parts) {
                for (const auto& [col, coef] : *row) {
                    out.emplace_back(col, scale * coef);
                }
            }
            return out;
        };
        const Row a = rows[idx(0, SimField::H, 0)];
        const Row aw = rows[idx(0, SimField::W2, 0)];
        const Row b = rows[idx(1, SimField::H, 0)];
        const Row bw = rows[idx(1, SimField::W2, 0)];
        const Row& gr = rows[g_row];
        const Complex c(state.c, 0.0);
        const Complex jump = 2.0 * i_unit * state.v1_plus * eta;
        const Row h_row = combine({{&a, c / (2.0 * c)},
                                   {&aw, -1.0 / (2.0 * c)},
                                   {&b, c / (2.0 * c)},
                                   {&bw, 1.0 / (2.0 * c)},
                                   {&gr, jump / (2.0 * c)}});
        const Row w2p_row = combine({{&b, 0.5 * c},
                                     {&bw, Complex(0.5, 0.0)},
                                     {&a, -0.5 * c},
                                     {&aw, Complex(0.5, 0.0)},
                                     {&gr, 0.5 * jump}});
        const Row w2m_row = combine({{&b, 0.5 * c},
                                     {&bw, Complex(0.5, 0.0)},
                                     {&a, -0.5 * c},
                                     {&aw, Complex(0.5, 0.0)},
                                     {&gr, -0.5 * jump}});
        rows[idx(0, SimField::H, 0)] = h_row;
        rows[idx(1, SimField::H, 0)] = h_row;
        rows[idx(0, SimField::W2, 0)] = w2p_row;
        rows[idx(1, SimField::W2, 0)] = w2m_row;
    }

    // Negative-semidefinite sixth-order dissipation -sigma c/(64 h) D3^T D3
    // on the wave pair (D3 = third forward difference). Interior rows equal
    // the classical sixth-difference filter; the symmetric form also covers
    // the closure nodes, damping grid-scale boundary modes at O(sigma c / h)
    // while perturbing smooth modes only at O(h^5), below the truncation
    // error of the scheme.
    {
        const double sigma = 0.03;
        const double d3[4] = {-1.0, 3.0, -3.0, 1.0};
        const double scale = sigma * state.c / (64.0 * h);
        for (int side = 0; side < 2; ++side) {
            for (SimField f : {SimField::H, SimField::W2}) {
                for (int r = 0; r <= n - 4; ++r) {
                    for (int a = 0; a < 4; ++a) {
                        // the interface rows keep their exact characteristic
                        // form so the jump conditions stay invariant
                        if (r + a == 0) continue;
                        Row& row = rows[idx(side, f, r + a)];
                        for (int b = 0; b < 4; ++b) {
                            row.emplace_back(
                                idx(side, f, r + b),
                                Complex(-scale * d3[a] * d3[b], 0.0));
                        }
                    }
                }
            }
        }
    }

    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(dim * 8);
    for (int r = 0; r < dim; ++r) {
        for (const auto& [col, coef] : rows[r]) {
            trips.emplace_back(r, col, coef);
        }
    }
    Generator gen;
    gen.state = state;
    gen.eta = eta;
    gen.grid = grid;
    gen.matrix.resize(dim, dim);
    gen.matrix.setFromTriplets(trips.begin(), trips.end());
    return gen;
}

namespace {

void enforce_constraints(const Generator& gen, SimState& s) {
    s.at(1, SimField::H, 0) = s.at(0, SimField::H, 0);
    s.at(1, SimField::W2, 0) =
        s.at(0, SimField::W2, 0) -
        2.0 * Complex(0.0, 1.0) * gen.state.v1_plus * gen.eta * s.g_hat();
}

double trapezoid_energy(const Generator& gen, const SimState& s) {
    const int n = gen.grid.N;
    const double h = gen.grid.spacing();
    const double c2 = gen.state.c * gen.state.c;
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
            double density = c2 * std::norm(s.at(side, SimField::H, i));
            density += std::norm(s.at(side, SimField::W1, i));
            density += std::norm(s.at(side, SimField::W2, i));
            for (SimField f : {SimField::E11, SimField::E21, SimField::E12,
                               SimField::E22}) {
                density += std::norm(s.at(side, f, i));
            }
            total += w * density;
        }
    }
    return 0.5 * total + 0.5 * std::norm(s.g_hat());
}

double interface_flux(const Generator& gen, const SimState& s) {
    const double c2 = gen.state.c * gen.state.c;
    const Complex g = s.g_hat();
    const Complex h0 = s.at(0, SimField::H, 0);
    const Complex w2p = s.at(0, SimField::W2, 0);
    const Complex i_unit(0.0, 1.0);
    return 2.0 * c2 * gen.state.v1_plus * gen.eta *
               std::real(i_unit * std::conj(h0) * g) +
           std::real(std::conj(g) * w2p);
}

double outer_boundary_max(const SimState& s) {
    const int n = s.grid.N;
    double m = 0.0;
    for (int side = 0; side < 2; ++side) {
        for (int f = 0; f < kSimFields; ++f) {
            m = std::max(m, std::abs(s.at(side, static_cast<SimField>(f),
                                          n - 1)));
        }
    }
    return m;
}

SimSample take_sample(const Generator& gen, const SimState& s, double t) {
    SimSample sample;
    sample.t = t;
    const double nrm = s.data.norm();
    sample.log_norm = nrm > 0.0 ? std::log(nrm) : -745.0;
    sample.energy = trapezoid_energy(gen, s);
    sample.flux = interface_flux(gen, s);
    sample.g_hat = s.g_hat();
    return sample;
}

}  // namespace

Trajectory evolve(const Generator& gen, const SimState& initial, double dt,
                  double T, double cfl) {
    if (!(dt > 0.0) || !(T > 0.0)) {
        throw std::invalid_argument("evolve: dt and T must be positive");
    }
    const double K = gen.state.elastic_number();
    const double M = gen.state.mach_number();
    const double dt_max =
        cfl * gen.grid.spacing() / (gen.state.c * (1.0 + M + K));
    if (dt > dt_max * (1.0 + 1e-12)) {
        throw std::invalid_argument(
            "evolve: dt = " + std::to_string(dt) + " violates the CFL bound " +
            std::to_string(dt_max));
    }
    if (initial.data.size() != gen.dim()) {
        throw std::invalid_argument("evolve: state/generator size mismatch");
    }

    Trajectory out;
    out.eta = gen.eta;
    out.grid = gen.grid;
    out.dt = dt;
    const int steps = static_cast<int>(std::ceil(T / dt - 1e-12));
    out.samples.reserve(steps + 1);

    SimState s = initial;
    enforce_constraints(gen, s);
    out.samples.push_back(take_sample(gen, s, s.time));
    out.max_outer_boundary = outer_boundary_max(s);

    Eigen::VectorXcd k1, k2, k3, k4;
    for (int step = 0; step < steps; ++step) {
        k1 = gen.matrix * s.data;
        k2 = gen.matrix * (s.data + 0.5 * dt * k1);
        k3 = gen.matrix * (s.data + 0.5 * dt * k2);
        k4 = gen.matrix * (s.data + dt * k3);
        s.data += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s.time += dt;
        enforce_constraints(gen, s);
        const double nrm = s.data.norm();
        if (!std::isfinite(nrm) || nrm > 1e100) {
            throw std::runtime_error(
                "evolve: blowup at t = " + std::to_string(s.time) +
                " (norm = " + std::to_string(nrm) + ")");
        }
        out.samples.push_back(take_sample(gen, s, s.time));
        out.max_outer_boundary =
            std::max(out.max_outer_boundary, outer_boundary_max(s));
    }
    out.final_state = std::move(s);
    return out;
}

GrowthFit measure_growth(const Trajectory& series) {
    const int m = static_cast<int>(series.samples.size());
    if (m < 5) {
        throw std::invalid_argument("measure_growth: too few samples");
    }
    const int start = m / 5;  // discard the transient window
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const int cnt = m - start;
    for (int i = start; i < m; ++i) {
        const double t = series.samples[i].t;
        const double y = series.samples[i].log_norm;
        st += t; sy += y; stt += t * t; sty += t * y;
    }
    GrowthFit fit;
    const double denom = cnt * stt - st * st;
    fit.rate = denom != 0.0 ? (cnt * sty - st * sy) / denom : 0.0;
    const double span =
        series.samples[m - 1].log_norm - series.samples[start].log_norm;
    fit.low_confidence = fit.rate <= 0.0 || span < 2.0;
    return fit;
}

namespace {

double abscissa_dense(const Generator& gen) {
    const int n = gen.dim();
    std::vector<Complex> a(static_cast<size_t>(n) * n, Complex(0.0, 0.0));
    for (int k = 0; k < gen.matrix.outerSize(); ++k) {
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(gen.matrix, k);
             it; ++it) {
            a[static_cast<size_t>(it.col()) * n + it.row()] = it.value();
        }
    }
    std::vector<Complex> w(n);
    const int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'N', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n,
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
        nullptr, 1);
    if (info != 0) {
        throw std::runtime_error("spectral_abscissa: zgeev failed with info " +
                                 std::to_string(info));
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (const Complex& ev : w) worst = std::max(worst, ev.real());
    return worst;
}

// spectral radius of the RK4-approximated propagator e^{A T}, Arnoldi
// subspace, mapped back through log|theta|/T
double abscissa_propagator(const Generator& gen) {
    const int dim = gen.dim();
    const double K = gen.state.elastic_number();
    const double M = gen.state.mach_number();
    const double horizon = 3.0 / std::max(1.0, std::abs(gen.eta));
    const double dt_max =
        0.4 * gen.grid.spacing() / (gen.state.c * (1.0 + M + K));
    const int steps = std::max(1, static_cast<int>(std::ceil(horizon / dt_max)));
    const double dt = horizon / steps;

    auto propagate = [&](Eigen::VectorXcd v) {
        Eigen::VectorXcd k1, k2, k3, k4;
        for (int s = 0; s < steps; ++s) {
            k1 = gen.matrix * v;
            k2 = gen.matrix * (v + 0.5 * dt * k1);
            k3 = gen.matrix * (v + 0.5 * dt * k2);
            k4 = gen.matrix * (v + dt * k3);
            v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return v;
    };

    const int m = std::min(30, dim - 1);
    Eigen::MatrixXcd V(dim, m + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd b(dim);
    for (int i = 0; i < dim; ++i) b[i] = Complex(gauss(rng), gauss(rng));
    V.col(0) = b / b.norm();

    int built = m;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXcd w = propagate(V.col(j));
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const Complex hij = V.col(i).dot(w);
                H(i, j) += hij;
                w -= hij * V.col(i);
            }
        }
        const double nw = w.norm();
        H(j + 1, j) = nw;
        if (nw < 1e-12) {
            built = j + 1;
            break;
        }
        V.col(j + 1) = w / nw;
    }

    const Eigen::MatrixXcd Hm = H.topLeftCorner(built, built);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Hm, false);
    double radius = 0.0;
    for (int i = 0; i < built; ++i) {
        radius = std::max(radius, std::abs(es.eigenvalues()[i]));
    }
    if (!(radius > 0.0)) {
        throw std::runtime_error(
            "spectral_abscissa: Arnoldi produced an empty spectrum");
    }
    return std::log(radius) / horizon;
}

}  // namespace

double spectral_abscissa(const Generator& gen, EigMethod method) {
    if (method == EigMethod::Auto) {
        method = gen.dim() <= 2000 ? EigMethod::Dense : EigMethod::Propagator;
    }
    return method == EigMethod::Dense ? abscissa_dense(gen)
                                      : abscissa_propagator(gen);
}

std::vector<double> energy_monitor(const Trajectory& series) {
    const int m = static_cast<int>(series.samples.size());
    std::vector<double> residuals;
    if (m < 5) return residuals;
    const double dt = series.dt;
    residuals.reserve(m - 4);
    for (int i = 2; i < m - 2; ++i) {
        const auto& s = series.samples;
        const double dedt = (-s[i + 2].energy + 8.0 * s[i + 1].energy -
                             8.0 * s[i - 1].energy + s[i - 2].energy) /
                            (12.0 * dt);
        residuals.push_back(std::abs(dedt - s[i].flux));
    }
    return residuals;
}

}  // namespace khi
