#include "nlv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlv/discrete_operators.hpp"
#include "nlv/error.hpp"

namespace nlv {

namespace {

constexpr int kMaxHalvings = 30;

// One IMEX update of a single density under a given competition field.
// Returns nullopt if the result has a negative entry.
std::optional<Field> imex_update(const Field& g, const Field& growth, const Field& competition,
                                 const TridiagonalOperator& laplacian, double dt) {
    const std::size_t n = g.size();
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double explicit_part = g[i] + dt * (growth[i] - competition[i]) * g[i];
        if (explicit_part < 0.0) return std::nullopt;
        rhs[i] = explicit_part / dt;
    }
    Field next = solve_shifted(laplacian, 1.0 / dt, Field(g.grid(), std::move(rhs)));
    if (next.min() < 0.0) return std::nullopt;
    return next;
}

double pressure_bound(const Field& competition) { return std::max(0.0, competition.max()); }

void check_dt(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
}

}  // namespace

void StepControl::validate() const {
    if (!(dt > 0.0) || !(t_end > 0.0) || !(stationarity_tol > 0.0) || !(snapshot_every > 0.0)) {
        throw InvalidArgument("step control: dt, t_end, stationarity_tol and snapshot_every must be positive");
    }
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::Stationary: return "stationary";
        case StopReason::Extinct: return "extinct";
        case StopReason::TimeLimit: return "time_limit";
    }
    return "unknown";
}

double stable_time_step(const SimState& state, const SpeciesParams& params) {
    const Field c = params.kernel.apply(state.g1);
    return 0.5 / (params.growth_bound() + pressure_bound(c) + 1e-300);
}

double stable_time_step(const SimState& state, const DimorphicParams& params) {
    const double p1 = integrate(pointwise_product(params.kernel(1, 1), state.g1)) +
                      (state.g2 ? integrate(pointwise_product(params.kernel(1, 2), *state.g2)) : 0.0);
    const double p2 = integrate(pointwise_product(params.kernel(2, 1), state.g1)) +
                      (state.g2 ? integrate(pointwise_product(params.kernel(2, 2), *state.g2)) : 0.0);
    const double a_inf = std::max(params.species1.growth_bound(), params.species2.growth_bound());
    return 0.5 / (a_inf + std::max({0.0, p1, p2}) + 1e-300);
}

SimState step_monomorphic(const SimState& state, const SpeciesParams& params, double dt) {
    check_dt(dt);
    require_same_grid(state.g1.grid(), params.grid(), "step_monomorphic");
    const TridiagonalOperator lap = assemble_neumann_laplacian(params.m, params.grid());
    const Field competition = params.kernel.apply(state.g1);
    double h = dt;
    for (int k = 0; k <= kMaxHalvings; ++k, h *= 0.5) {
        if (auto next = imex_update(state.g1, params.growth, competition, lap, h)) {
            return SimState{state.t + h, std::move(*next), std::nullopt};
        }
    }
    throw NumericalError("step_monomorphic: positivity lost after " + std::to_string(kMaxHalvings) +
                         " halvings of dt=" + std::to_string(dt) + " at t=" + std::to_string(state.t));
}

SimState step_dimorphic(const SimState& state, const DimorphicParams& params, double dt) {
    check_dt(dt);
    if (!state.g2) throw InvalidArgument("step_dimorphic: state has no second density");
    const Grid& grid = params.grid();
    require_same_grid(state.g1.grid(), grid, "step_dimorphic");
    require_same_grid(state.g2->grid(), grid, "step_dimorphic");

    const Field& g1 = state.g1;
    const Field& g2 = *state.g2;
    const double s1 = integrate(pointwise_product(params.kernel(1, 1), g1)) +
                      integrate(pointwise_product(params.kernel(1, 2), g2));
    const double s2 = integrate(pointwise_product(params.kernel(2, 1), g1)) +
                      integrate(pointwise_product(params.kernel(2, 2), g2));
    const Field c1 = Field::constant(grid, s1);
    const Field c2 = Field::constant(grid, s2);
    const TridiagonalOperator lap1 = assemble_neumann_laplacian(params.species1.m, grid);
    const TridiagonalOperator lap2 = assemble_neumann_laplacian(params.species2.m, grid);

    double h = dt;
    for (int k = 0; k <= kMaxHalvings; ++k, h *= 0.5) {
        auto n1 = imex_update(g1, params.species1.growth, c1, lap1, h);
        if (!n1) continue;
        auto n2 = imex_update(g2, params.species2.growth, c2, lap2, h);
        if (!n2) continue;
        return SimState{state.t + h, std::move(*n1), std::move(*n2)};
    }
    throw NumericalError("step_dimorphic: positivity lost after " + std::to_string(kMaxHalvings) +
                         " halvings of dt=" + std::to_string(dt) + " at t=" + std::to_string(state.t));
}

namespace {

double state_mass(const SimState& s) { return integrate(s.g1) + (s.g2 ? integrate(*s.g2) : 0.0); }

double state_scale(const SimState& s) {
    double m = s.g1.max_abs();
    if (s.g2) m = std::max(m, s.g2->max_abs());
    return std::min(1.0, m);
}

double state_change(const SimState& a, const SimState& b) {
    double d = max_abs_difference(a.g1, b.g1);
    if (a.g2 && b.g2) d = std::max(d, max_abs_difference(*a.g2, *b.g2));
    return d;
}

void record(MassTrajectory& traj, const SimState& s) {
    traj.times.push_back(s.t);
    traj.rho1.push_back(integrate(s.g1));
    if (s.g2) traj.rho2->push_back(integrate(*s.g2));
}

template <typename Params, typename Stepper>
RunResult run_loop(SimState state, const Params& params, const StepControl& ctl, Stepper step) {
    ctl.validate();
    RunResult out{state, {}, StopReason::TimeLimit, 0, {}};
    if (state.g2) out.masses.rho2.emplace();
    record(out.masses, state);
    if (ctl.keep_snapshots) out.snapshots.push_back(state);
    double next_snapshot = state.t + ctl.snapshot_every;

    while (state.t < ctl.t_end) {
        if (state_mass(state) < kExtinctionMass) {
            out.reason = StopReason::Extinct;
            break;
        }
        double dt = std::min(ctl.dt, stable_time_step(state, params));
        dt = std::min(dt, ctl.t_end - state.t);
        SimState next = step(state, params, dt);
        const double taken = next.t - state.t;
        const double rate = state_change(state, next) / taken;
        state = std::move(next);
        ++out.steps;
        if (state.t >= next_snapshot || state.t >= ctl.t_end) {
            record(out.masses, state);
            if (ctl.keep_snapshots) out.snapshots.push_back(state);
            while (next_snapshot <= state.t) next_snapshot += ctl.snapshot_every;
        }
        // Relative below unit density, so a decaying population is never mistaken for a steady one.
        if (rate < ctl.stationarity_tol * state_scale(state) && state_mass(state) >= kExtinctionMass) {
            out.reason = StopReason::Stationary;
            break;
        }
    }
    if (out.masses.times.back() != state.t) {
        record(out.masses, state);
        if (ctl.keep_snapshots) out.snapshots.push_back(state);
    }
    if (out.reason == StopReason::TimeLimit && state_mass(state) < kExtinctionMass) {
        out.reason = StopReason::Extinct;
    }
    out.state = std::move(state);
    return out;
}

}  // namespace

RunResult run_to_stationarity(SimState state, const SpeciesParams& params, const StepControl& ctl) {
    if (state.g2) throw InvalidArgument("monomorphic run given a second density");
    return run_loop(std::move(state), params, ctl,
                    [](const SimState& s, const SpeciesParams& p, double dt) { return step_monomorphic(s, p, dt); });
}

RunResult run_to_stationarity(SimState state, const DimorphicParams& params, const StepControl& ctl) {
    if (!state.g2) throw InvalidArgument("dimorphic run needs a second density");
    return run_loop(std::move(state), params, ctl,
                    [](const SimState& s, const DimorphicParams& p, double dt) { return step_dimorphic(s, p, dt); });
}

namespace {

using Vec2 = std::array<double, 2>;

Vec2 mass_rhs(double t, const Vec2& r, double H1, double H2, const InteractionMatrix& mu, const Perturbation& e) {
    const Vec2 pert = e ? e(t) : Vec2{0.0, 0.0};
    return {r[0] * (H1 + pert[0] - mu(1, 1) * r[0] - mu(1, 2) * r[1]),
            r[1] * (H2 + pert[1] - mu(2, 1) * r[0] - mu(2, 2) * r[1])};
}

Vec2 axpy(const Vec2& x, double a, const Vec2& y) { return {x[0] + a * y[0], x[1] + a * y[1]}; }

}  // namespace

MassTrajectory integrate_mass_ode(double H1, double H2, const InteractionMatrix& mu, std::array<double, 2> rho0,
                                  const Perturbation& perturbation, double t_end, double record_every) {
    if (rho0[0] < 0.0 || rho0[1] < 0.0) throw InvalidArgument("mass ODE: initial masses must be nonnegative");
    if (!(t_end > 0.0) || !(record_every > 0.0)) throw InvalidArgument("mass ODE: t_end and record_every must be positive");
    double scale = std::max({std::abs(H1), std::abs(H2), std::abs(mu(1, 1)), std::abs(mu(1, 2)),
                             std::abs(mu(2, 1)), std::abs(mu(2, 2))});
    const double dt = 1e-2 * std::min(1.0, scale > 0.0 ? 1.0 / scale : 1.0);

    MassTrajectory traj;
    traj.rho2.emplace();
    auto push = [&](double t, const Vec2& r) {
        traj.times.push_back(t);
        traj.rho1.push_back(r[0]);
        traj.rho2->push_back(r[1]);
    };

    Vec2 r = rho0;
    double t = 0.0;
    push(t, r);
    double next_record = record_every;
    const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
    for (long long k = 0; k < steps; ++k) {
        const double h = std::min(dt, t_end - t);
        const Vec2 k1 = mass_rhs(t, r, H1, H2, mu, perturbation);
        const Vec2 k2 = mass_rhs(t + 0.5 * h, axpy(r, 0.5 * h, k1), H1, H2, mu, perturbation);
        const Vec2 k3 = mass_rhs(t + 0.5 * h, axpy(r, 0.5 * h, k2), H1, H2, mu, perturbation);
        const Vec2 k4 = mass_rhs(t + h, axpy(r, h, k3), H1, H2, mu, perturbation);
        for (int i = 0; i < 2; ++i) r[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = (k + 1 == steps) ? t_end : t + h;
        if (!(std::abs(r[0]) <= 1e6) || !(std::abs(r[1]) <= 1e6)) {
            throw NumericalError("mass ODE blow-up at t=" + std::to_string(t) + ": rho=(" + std::to_string(r[0]) +
                                 ", " + std::to_string(r[1]) + ")");
        }
        if (t >= next_record - 1e-12 || k + 1 == steps) {
            push(t, r);
            while (next_record <= t + 1e-12) next_record += record_every;
        }
    }
    return traj;
}

double scalar_logistic_limit(double r, double mu, double rho0, const std::function<double(double)>& perturbation,
                             double t_end) {
    if (!(mu > 0.0) || !(rho0 > 0.0)) throw InvalidArgument("logistic limit: need mu > 0 and rho0 > 0");
    // Second equation decoupled and started at zero: it stays zero.
    const InteractionMatrix m = InteractionMatrix::from_entries(mu, 0.0, 0.0, 1.0);
    Perturbation e;
    if (perturbation) e = [&](double t) { return Vec2{perturbation(t), 0.0}; };
    const MassTrajectory traj = integrate_mass_ode(r, 0.0, m, {rho0, 0.0}, e, t_end, t_end);
    return traj.rho1.back();
}

std::array<double, 2> measured_perturbations(const SimState& state, const DimorphicParams& params, double H1,
                                             double H2, const InteractionMatrix& mu) {
    if (!state.g2) throw InvalidArgument("measured_perturbations needs a dimorphic state");
    const std::array<const Field*, 2> g{&state.g1, &*state.g2};
    const std::array<const Field*, 2> a{&params.species1.growth, &params.species2.growth};
    const std::array<double, 2> H{H1, H2};
    const std::array<double, 2> rho{integrate(state.g1), integrate(*state.g2)};
    std::array<double, 2> d{};
    for (int i = 0; i < 2; ++i) {
        if (!(rho[i] > 0.0)) throw InvalidArgument("measured_perturbations: a mass is zero");
        double v = inner_l2(*a[i], *g[i]) / rho[i] - H[i];
        for (int j = 0; j < 2; ++j) {
            v -= (inner_l2(params.kernel(i + 1, j + 1), *g[j]) / rho[j] - mu(i + 1, j + 1)) * rho[j];
        }
        d[i] = v;
    }
    return d;
}

}  // namespace nlv
