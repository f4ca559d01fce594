#pragma once

#include <array>
#include <optional>

#include "nlv/core_types.hpp"

namespace nlv {

/// Principal eigenpair (H, A1) of m*Laplacian + a with Neumann conditions,
/// plus the second eigenvalue found by deflation.
struct SpectralSummary {
    double H;
    Field A1;            // strictly positive, integral of |A1| equal to 1
    double lambda2;
    Field second_mode;   // eigenvector for lambda2, L1-normalized; changes sign
    double residual;     // max |L A1 - H A1| achieved
    int iterations;
};

struct InteractionMatrix {
    std::array<std::array<double, 2>, 2> mu;  // mu[i][j] = integral of I_{i+1,j+1} * A1 of type j+1
    double det;
    bool degenerate;

    double operator()(int i, int j) const { return mu[i - 1][j - 1]; }

    /// Build from explicit entries; det and the degeneracy flag are derived.
    static InteractionMatrix from_entries(double mu11, double mu12, double mu21, double mu22,
                                          double eps_det = 1e-8);
};

/// Inverse iteration with Rayleigh-quotient shifts on the tridiagonal
/// operator, started from the constant field. lambda2 comes from the same
/// iteration restricted to the weighted orthogonal complement of A1.
/// Throws NumericalError (carrying the best residual) when it does not converge.
SpectralSummary principal_eigenpair(const SpeciesParams& params, const Grid& grid);

/// Rayleigh quotient -[m int|u'|^2 - int a u^2] / int u^2 using forward
/// differences on cell midpoints. Never exceeds H on the same grid.
double rayleigh_quotient(const SpeciesParams& params, const Field& u);

/// Estimates H as integral of I * g(T) after running the monomorphic
/// equation from g = 1 to stationarity (or to `horizon`). Needs a separable
/// kernel. Returns nullopt when the mass falls below 1e-10 (extinction).
std::optional<double> estimate_H_by_simulation(const SpeciesParams& params, const Grid& grid, double horizon);

/// mu_ij = integral of I_ij * A1^j. Degenerate when
/// |det| <= eps_det * (mu11 mu22 + |mu12 mu21|).
InteractionMatrix interaction_matrix(const DimorphicParams& params, const SpectralSummary& s1,
                                     const SpectralSummary& s2, double eps_det = 1e-8);

}  // namespace nlv
