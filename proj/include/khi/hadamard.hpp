#ifndef KHI_HADAMARD_HPP
#define KHI_HADAMARD_HPP

#include <limits>
#include <vector>

#include "khi/norms.hpp"

namespace khi {

// Smooth bump in frequency, supported in (n, n+1), normalized so that
// int (1+eta^2)^{j+1} |amplitude|^2 d eta = 1 / (cbar_j^2 n^2).
struct BumpProfile {
    int n = 1;
    int j = 0;
    double cbar_j = 1.0;
    double scale = 0.0;

    double amplitude(double eta) const;
};

BumpProfile make_bump(int n, int j, double cbar_j = 1.0);

// A norm together with its base-10 logarithm; value saturates to +inf
// past the double range while log10 stays finite.
struct NormValue {
    double value = 0.0;
    double log10 = -std::numeric_limits<double>::infinity();
};

struct SequenceNorms {
    NormValue f, h, v, g;

    double combined() const { return f.value + h.value + v.value + g.value; }
    double combined_log10() const;
};

// Upper bounds C_univ/n implied by the closed-form constants; reported
// alongside the initial norms.
struct InitialBounds {
    double f = 0.0, h = 0.0, v = 0.0, g = 0.0;
};

// Norms of the on-shell mode family built from the bump at time t, with the
// spectral growth weight e^{2 X1 eta t} evaluated exactly inside the
// integrals.
SequenceNorms sequence_norms(const BackgroundState& state,
                             const BumpProfile& bump, int sobolev_index,
                             double t);

SequenceNorms sequence_initial_norms(const BackgroundState& state, int n,
                                     int j, double cbar_j = 1.0);

InitialBounds initial_norm_bounds(const BackgroundState& state, int n, int j,
                                  double cbar_j = 1.0);

SequenceNorms sequence_grown_norms(const BackgroundState& state, int n, int k,
                                   double t, int j, double cbar_j = 1.0);

// Smallest n with e^{2 X1 n T0} / (1+(n+1)^2)^{j-k+1} >= alpha^2 cbar^2 n^2,
// scanned in log space.
long find_n_star(const BackgroundState& state, double alpha, double t0, int j,
                 int k, double cbar_j = 1.0);

struct IllposednessRow {
    int n = 0;
    SequenceNorms initial;
    SequenceNorms grown;
    double log10_ratio = 0.0;
};

std::vector<IllposednessRow> illposedness_table(const BackgroundState& state,
                                                int j, int k, double t0,
                                                const std::vector<int>& n_list,
                                                double cbar_j = 1.0);

}  // namespace khi

#endif  // KHI_HADAMARD_HPP
