#include "nlv/steady_states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlv/discrete_operators.hpp"
#include "nlv/error.hpp"

namespace nlv {

std::optional<Field> steady_monomorphic_separable(const SpeciesParams& params, const SpectralSummary& spec) {
    if (!params.kernel.is_separable()) {
        throw InvalidArgument("steady_monomorphic_separable needs a separable kernel");
    }
    const double mu = inner_l2(params.kernel.weight(), spec.A1);
    if (!(mu > 0.0)) {
        throw InvalidArgument("steady_monomorphic_separable: integral of I*A1 is not positive");
    }
    if (spec.H <= 0.0) return std::nullopt;
    return (spec.H / mu) * spec.A1;
}

double steady_residual(const SpeciesParams& params, const Field& g) {
    const TridiagonalOperator op = assemble_reaction_operator(params, g.grid());
    const Field lg = op.apply(g);
    const Field pressure = params.kernel.apply(g);
    return max_abs_difference(lg, pointwise_product(pressure, g));
}

double apriori_bound_1d(const SpeciesParams& params, const Grid& grid) {
    require_same_grid(params.grid(), grid, "apriori_bound_1d");
    const double a_inf = params.growth_bound();
    const double m = params.m;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x0 = grid.node(i);
        double s = 0.0;
        for (std::size_t j = 0; j < grid.n(); ++j) {
            const double d = grid.node(j) - x0;
            const double tent = std::max(0.0, 1.0 - a_inf * d * d / (2.0 * m));
            s += grid.weight(j) * params.kernel.at(i, j) * tent;
        }
        if (!(s > 0.0)) {
            throw InvalidArgument("apriori_bound_1d: kernel vanishes near the diagonal at x=" +
                                  std::to_string(x0) + " (need I(x,x) bounded below)");
        }
        worst = std::max(worst, 1.0 / s);
    }
    return a_inf * worst;
}

namespace {

// One application of the map U with parameter delta.
Field upsilon(const SpeciesParams& params, const TridiagonalOperator& op, const Field& h, double delta) {
    const Field pressure = params.kernel.apply(h);
    std::vector<double> rhs(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) rhs[i] = h[i] * (1.0 - delta * pressure[i]) / delta;
    return solve_shifted(op, 1.0 / delta, Field(h.grid(), std::move(rhs)));
}

}  // namespace

FixedPointReport steady_fixed_point(const SpeciesParams& params, const Grid& grid, const FixedPointOptions& opts) {
    require_same_grid(params.grid(), grid, "steady_fixed_point");
    const SpectralSummary spec = principal_eigenpair(params, grid);
    if (spec.H <= 0.0) {
        throw InvalidArgument("steady_fixed_point: principal eigenvalue H <= 0, only the trivial steady state exists");
    }
    const double a_inf = params.growth_bound();
    const double R = apriori_bound_1d(params, grid);
    double delta = opts.delta.value_or(
        0.5 / (a_inf + params.kernel.upper_bound() * R * std::sqrt(grid.length()) + std::abs(spec.H)));
    if (!(delta > 0.0) || !(1.0 - delta * a_inf > 0.0)) {
        throw InvalidArgument("steady_fixed_point: delta must be positive with 1 - delta*a_inf > 0");
    }

    Field g = opts.initial.value_or(spec.A1);
    require_same_grid(g.grid(), grid, "steady_fixed_point initial iterate");
    if (!(g.min() > 0.0)) throw InvalidArgument("steady_fixed_point: initial iterate must be positive");

    const TridiagonalOperator op = assemble_reaction_operator(params, grid);
    double omega = 1.0;
    bool damped = false;
    int delta_halvings = 0;
    double increment = 0.0;
    double previous = 0.0;
    const double blow_up = 1e3 * std::max(R, 1.0);

    for (int k = 1; k <= opts.max_iterations; ++k) {
        Field next = upsilon(params, op, g, delta);
        if (omega < 1.0) next = (1.0 - omega) * g + omega * next;
        if (!(next.min() > 0.0)) {
            if (!damped) {
                damped = true;
                omega = 0.5;
            } else if (delta_halvings < 10) {
                delta *= 0.5;
                ++delta_halvings;
            } else {
                std::ostringstream msg;
                msg << "steady_fixed_point: positivity lost at iteration " << k << " with delta=" << delta;
                throw NumericalError(msg.str());
            }
            continue;
        }
        if (next.max() > blow_up) {
            std::ostringstream msg;
            msg << "steady_fixed_point: iteration diverged at iteration " << k << " with delta=" << delta
                << " (max g=" << next.max() << ")";
            throw NumericalError(msg.str());
        }
        increment = max_abs_difference(next, g) / g.max_abs();
        g = std::move(next);
        // Slow contraction leaves the iterate far from the fixed point even when
        // one step is small; inc * q / (1 - q) bounds that distance.
        const double q = previous > 0.0 ? increment / previous : 1.0;
        previous = increment;
        const double error = q < 1.0 ? increment * q / (1.0 - q) : increment;
        if (increment < opts.tol && error < opts.tol) {
            const double residual = steady_residual(params, g) / g.max_abs();
            if (residual < 1e-6) return FixedPointReport{g, delta, k, increment, residual, damped};
        }
    }
    std::ostringstream msg;
    msg << "steady_fixed_point: no convergence after " << opts.max_iterations << " iterations with delta=" << delta
        << " (last increment " << increment << ")";
    throw NumericalError(msg.str());
}

Field steady_fixed_point_general(const SpeciesParams& params, const Grid& grid, std::optional<double> delta) {
    FixedPointOptions opts;
    opts.delta = delta;
    return steady_fixed_point(params, grid, opts).g;
}

SteadyStateSet coexistence_state(const InteractionMatrix& mu, double H1, double H2, const SpectralSummary& s1,
                                 const SpectralSummary& s2) {
    if (mu.degenerate) {
        throw InvalidArgument("coexistence_state: mu11*mu22 - mu12*mu21 vanishes (degenerate interaction matrix)");
    }
    SteadyStateSet set;
    if (H1 > 0.0) set.pure1 = (H1 / mu(1, 1)) * s1.A1;
    if (H2 > 0.0) set.pure2 = (H2 / mu(2, 2)) * s2.A1;

    const double d21 = H2 * mu(1, 1) - H1 * mu(2, 1);
    const double d12 = H1 * mu(2, 2) - H2 * mu(1, 2);
    if (H1 > 0.0 && H2 > 0.0 && d21 * d12 > 0.0) {
        const double r1 = d12 / mu.det;
        const double r2 = d21 / mu.det;
        if (r1 > 0.0 && r2 > 0.0) {
            set.r = std::make_pair(r1, r2);
            set.coexistence = std::make_pair(r1 * s1.A1, r2 * s2.A1);
            const double e1 = mu(1, 1) * r1 + mu(1, 2) * r2 - H1;
            const double e2 = mu(2, 1) * r1 + mu(2, 2) * r2 - H2;
            set.linear_residual = std::max(std::abs(e1), std::abs(e2)) / std::max(std::abs(H1), std::abs(H2));
        }
    }
    return set;
}

}  // namespace nlv
