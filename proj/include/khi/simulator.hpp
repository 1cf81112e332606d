#ifndef KHI_SIMULATOR_HPP
#define KHI_SIMULATOR_HPP

#include <Eigen/Sparse>
#include <vector>

#include "khi/modes.hpp"

namespace khi {

// Truncated half-lines [0, L] and [-L, 0], N nodes per side, both sides
// carrying their own interface node at x2 = 0.
struct Grid1D {
    double L = 40.0;
    int N = 256;

    double spacing() const { return L / (N - 1); }
    void validate() const;
};

// Field block order inside the stacked vector; per side, each block holds N
// nodes ordered from the interface outward.
enum class SimField { H = 0, W1, W2, E11, E21, E12, E22 };
constexpr int kSimFields = 7;

// Stacked complex state: side-major, field-major, node-minor, front
// amplitude last. dim = 14 N + 1.
struct SimState {
    double eta = 0.0;
    double time = 0.0;
    Grid1D grid;
    Eigen::VectorXcd data;

    static SimState zero(double eta, const Grid1D& grid);
    // sample the analytic mode profiles onto the grid
    static SimState from_mode(const NormalMode& mode, const Grid1D& grid);

    int index(int side, SimField f, int node) const;
    Complex& at(int side, SimField f, int node);
    Complex at(int side, SimField f, int node) const;
    Complex& g_hat() { return data[data.size() - 1]; }
    Complex g_hat() const { return data[data.size() - 1]; }
};

// Discrete generator A with the two interface jump rows eliminated into it;
// d/dt u = A u reproduces the per-wavenumber linearized system.
struct Generator {
    BackgroundState state;
    double eta = 0.0;
    Grid1D grid;
    Eigen::SparseMatrix<Complex> matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

Generator assemble_generator(const BackgroundState& state, double eta,
                             const Grid1D& grid);

struct SimSample {
    double t = 0.0;
    double log_norm = 0.0;  // log of the Euclidean norm of the stacked state
    double energy = 0.0;    // trapezoid energy incl. front term
    double flux = 0.0;      // interface energy flux
    Complex g_hat;
};

struct Trajectory {
    double eta = 0.0;
    Grid1D grid;
    double dt = 0.0;
    std::vector<SimSample> samples;
    SimState final_state;
    double max_outer_boundary = 0.0;  // reflection diagnostic
};

// RK4 march of the generator; dt must respect the CFL bound
// dt <= cfl * dx / (c (1 + M + K)). Jump constraints re-enforced each step.
Trajectory evolve(const Generator& gen, const SimState& initial, double dt,
                  double T, double cfl = 0.4);

struct GrowthFit {
    double rate = 0.0;
    bool low_confidence = false;  // non-growing or span below two e-folds
};

// Least-squares slope of log_norm against t after discarding the first 20%.
GrowthFit measure_growth(const Trajectory& series);

enum class EigMethod { Auto, Dense, Propagator };

// Max real part of the generator spectrum. Dense LAPACK eigensolve for small
// operators; for large ones, the spectral radius of the RK4-approximated
// propagator e^{A T} via Arnoldi, mapped back by log|theta|/T.
double spectral_abscissa(const Generator& gen,
                         EigMethod method = EigMethod::Auto);

// |dE/dt - flux| per interior sample; dE/dt by fourth-order centered
// differences of the stored energy series.
std::vector<double> energy_monitor(const Trajectory& series);

}  // namespace khi

#endif  // KHI_SIMULATOR_HPP
