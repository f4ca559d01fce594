#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "nlv/core_types.hpp"
#include "nlv/spectral.hpp"

namespace nlv {

struct SimState {
    double t = 0.0;
    Field g1;
    std::optional<Field> g2;  // absent in monomorphic runs
};

struct MassTrajectory {
    std::vector<double> times;
    std::vector<double> rho1;
    std::optional<std::vector<double>> rho2;

    std::size_t size() const noexcept { return times.size(); }
};

struct StepControl {
    double dt = 0.1;                 // upper bound; each step also obeys the reaction stability bound
    double t_end = 1000.0;
    double stationarity_tol = 1e-8;  // on max |g(t+dt) - g(t)| / dt, times min(1, max |g|)
    double snapshot_every = 1.0;
    bool keep_snapshots = false;     // also store full states at snapshot times

    void validate() const;
};

enum class StopReason { Stationary, Extinct, TimeLimit };

const char* to_string(StopReason r);

struct RunResult {
    SimState state;
    MassTrajectory masses;
    StopReason reason;
    std::size_t steps;
    std::vector<SimState> snapshots;
};

/// Total mass below which a run is reported extinct.
inline constexpr double kExtinctionMass = 1e-10;

/// Largest dt for which the explicit reaction part keeps densities positive:
/// 0.5 / (a_inf + max competition) evaluated at the current state.
double stable_time_step(const SimState& state, const SpeciesParams& params);
double stable_time_step(const SimState& state, const DimorphicParams& params);

/// One IMEX step of dg/dt = m g'' + (a - int I g) g: implicit diffusion,
/// explicit reaction with the nonlocal term frozen at the step start.
/// A step producing a negative density is retried with dt halved (at most
/// 30 times); the returned state carries the time actually reached.
SimState step_monomorphic(const SimState& state, const SpeciesParams& params, double dt);

/// Same scheme for the two-type system; the two tridiagonal solves are independent.
SimState step_dimorphic(const SimState& state, const DimorphicParams& params, double dt);

/// Steps until max |g(t+dt) - g(t)| / dt < tol * min(1, max |g|) (with mass above
/// the extinction threshold), until the total mass drops below kExtinctionMass,
/// or until t_end.
RunResult run_to_stationarity(SimState state, const SpeciesParams& params, const StepControl& ctl);
RunResult run_to_stationarity(SimState state, const DimorphicParams& params, const StepControl& ctl);

using Perturbation = std::function<std::array<double, 2>(double)>;

/// Classic RK4 on rho_i' = rho_i (H_i + E_i(t) - mu_i1 rho_1 - mu_i2 rho_2).
/// Step 1e-2 * min(1, 1/max(|H1|, |H2|, max mu)). Samples are stored every
/// `record_every` time units plus the final time. Throws NumericalError if a
/// mass exceeds 1e6.
MassTrajectory integrate_mass_ode(double H1, double H2, const InteractionMatrix& mu, std::array<double, 2> rho0,
                                  const Perturbation& perturbation, double t_end, double record_every = 1.0);

/// rho(t_end) for rho' = rho (r + E(t) - mu rho), same integrator.
double scalar_logistic_limit(double r, double mu, double rho0, const std::function<double(double)>& perturbation,
                             double t_end);

/// D_i(t) measured on a PDE state: the gap between the exact mass equation
/// and the reduced ODE driven by H_i and mu_ij.
std::array<double, 2> measured_perturbations(const SimState& state, const DimorphicParams& params, double H1,
                                             double H2, const InteractionMatrix& mu);

}  // namespace nlv
