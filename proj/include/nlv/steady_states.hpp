#pragma once

#include <optional>
#include <utility>

#include "nlv/core_types.hpp"
#include "nlv/spectral.hpp"

namespace nlv {

/// The nonnegative steady states of the two-type system. The trivial state
/// (0, 0) always exists and is not stored.
struct SteadyStateSet {
    std::optional<Field> pure1;                          // (H1/mu11) A1^1, iff H1 > 0
    std::optional<Field> pure2;                          // (H2/mu22) A1^2, iff H2 > 0
    std::optional<std::pair<Field, Field>> coexistence;  // (r1 A1^1, r2 A1^2)
    std::optional<std::pair<double, double>> r;          // masses of the coexistence state
    double linear_residual = 0.0;                        // relative residual of mu r = H
};

/// g = (H/mu) A1 with mu = integral of I A1, or nullopt when H <= 0.
std::optional<Field> steady_monomorphic_separable(const SpeciesParams& params, const SpectralSummary& spec);

struct FixedPointReport {
    Field g;
    double delta;
    int iterations;
    double increment;  // last max |g_{k+1} - g_k| / max |g_k|
    double residual;   // max |m g'' + (a - int I(.,y) g(y) dy) g| / max |g|
    bool damped;
};

struct FixedPointOptions {
    std::optional<double> delta;   // auto-selected when absent
    std::optional<Field> initial;  // A1 when absent; must be positive
    double tol = 1e-10;            // on max |g_{k+1} - g_k| / max |g_k|
    int max_iterations = 200000;
};

/// Fixed-point iteration g <- U(g) where U(h) solves
/// -m delta g'' - delta a g + g = h (1 - delta int I(., y) h(y) dy)
/// with Neumann conditions, started from A1. When `delta` is absent it is
/// 0.5 / (a_inf + I^+ R sqrt|X| + |H|) with R from apriori_bound_1d.
/// Stops when the relative increment drops below opts.tol and the relative
/// residual is below 1e-6. An iterate that loses positivity switches the
/// iteration to 0.5 damping, then to halved delta. Throws NumericalError on
/// divergence, persistent positivity loss or the iteration cap.
FixedPointReport steady_fixed_point(const SpeciesParams& params, const Grid& grid, const FixedPointOptions& opts = {});

/// Returns only the converged field of steady_fixed_point.
Field steady_fixed_point_general(const SpeciesParams& params, const Grid& grid,
                                 std::optional<double> delta = std::nullopt);

/// Steady-equation residual max |m g'' + (a - int I(., y) g(y) dy) g|.
double steady_residual(const SpeciesParams& params, const Field& g);

/// R = a_inf * max over nodes x0 of
/// (integral of I(x0, y) (1 - a_inf (y - x0)^2 / (2m))_+ dy)^{-1}.
/// Every nonnegative steady state satisfies max g <= R.
double apriori_bound_1d(const SpeciesParams& params, const Grid& grid);

/// Populates the steady-state set from H_i, mu and the principal
/// eigenfunctions. The coexistence masses are r_i = (H_i mu_jj - H_j mu_ij) / det.
/// Throws InvalidArgument for a degenerate mu.
SteadyStateSet coexistence_state(const InteractionMatrix& mu, double H1, double H2, const SpectralSummary& s1,
                                 const SpectralSummary& s2);

}  // namespace nlv
