#include "nlv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nlv/discrete_operators.hpp"
#include "nlv/dynamics.hpp"
#include "nlv/error.hpp"

namespace nlv {

namespace {

constexpr int kPhaseOneCap = 20000;
constexpr int kRqiCap = 60;

struct Iterate {
    Field v;
    double rq;
    double residual;  // max |L v - rq v| / max |v|
};

// Rayleigh quotient and residual in the trapezoid inner product, in which the
// Neumann operator is self-adjoint.
Iterate evaluate(const TridiagonalOperator& op, Field v) {
    const Field lv = op.apply(v);
    const double rq = inner_l2(lv, v) / inner_l2(v, v);
    const double res = max_abs_difference(lv, rq * v) / v.max_abs();
    return Iterate{std::move(v), rq, res};
}

Field normalize_l2(const Field& v) { return (1.0 / norm_l2(v)) * v; }

Field deflate(const Field& v, const Field* against) {
    if (!against) return v;
    const double c = inner_l2(v, *against) / inner_l2(*against, *against);
    return v - c * (*against);
}

// Solve with a shift that may hit an eigenvalue exactly; nudge it if so.
Field robust_solve(const TridiagonalOperator& op, double shift, const Field& rhs, double scale) {
    for (int k = 0; k < 8; ++k) {
        try {
            return solve_shifted(op, shift, rhs);
        } catch (const NumericalError&) {
            shift += 1e-11 * scale * std::pow(10.0, k);
        }
    }
    return solve_shifted(op, shift, rhs);
}

// Largest eigenpair of op on the complement of `against` (or on the whole
// space). Phase one: inverse iteration with a fixed shift above the spectrum.
// Phase two: Rayleigh-quotient iteration.
Iterate dominant_pair(const TridiagonalOperator& op, Field start, const Field* against, double upper, double margin,
                      double scale, double tol, int& iterations) {
    const double shift0 = upper + margin;
    Iterate it = evaluate(op, normalize_l2(deflate(start, against)));
    double prev_rq = it.rq;
    const double phase_one_tol = std::max(1e-6 * scale, 1e3 * tol);
    for (int k = 0; k < kPhaseOneCap; ++k) {
        ++iterations;
        Field next = robust_solve(op, shift0, it.v, scale);
        it = evaluate(op, normalize_l2(deflate(next, against)));
        if (it.residual <= tol) return it;
        const bool settled = std::abs(it.rq - prev_rq) <= 1e-12 * scale;
        prev_rq = it.rq;
        if (it.residual <= phase_one_tol || settled) break;
    }

    Iterate best = it;
    for (int k = 0; k < kRqiCap && it.residual > tol; ++k) {
        ++iterations;
        Field next = robust_solve(op, it.rq, it.v, scale);
        it = evaluate(op, normalize_l2(deflate(next, against)));
        if (it.residual < best.residual) best = it;
        if (best.residual <= tol) break;
    }
    return best;
}

Field l1_normalized(const Field& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v.grid().weight(i) * std::abs(v[i]);
    return (1.0 / s) * v;
}

}  // namespace

InteractionMatrix InteractionMatrix::from_entries(double mu11, double mu12, double mu21, double mu22, double eps_det) {
    InteractionMatrix m{};
    m.mu = {{{mu11, mu12}, {mu21, mu22}}};
    m.det = mu11 * mu22 - mu12 * mu21;
    m.degenerate = std::abs(m.det) <= eps_det * (std::abs(mu11 * mu22) + std::abs(mu12 * mu21));
    return m;
}

SpectralSummary principal_eigenpair(const SpeciesParams& params, const Grid& grid) {
    const TridiagonalOperator op = assemble_reaction_operator(params, grid);
    const double a_max = params.growth.max();
    const double scale = std::abs(a_max) + params.growth_bound() + params.m / (grid.h() * grid.h());
    const double target = 1e-13 * scale;
    const double accept = 1e-9 * scale;
    const double margin = 1e-3 * (1.0 + params.growth_bound());
    int iterations = 0;

    // H never exceeds max a, so shifts above it keep the solve definite.
    Iterate top = dominant_pair(op, Field::constant(grid, 1.0), nullptr, a_max, margin, scale, target, iterations);
    Field a1 = top.v;
    if (integrate(a1) < 0.0) a1 = -1.0 * a1;
    if (a1.min() <= 0.0 || top.residual > accept) {
        // RQI can lock onto a non-principal pair; fall back to plain inverse iteration.
        Iterate slow = evaluate(op, normalize_l2(Field::constant(grid, 1.0)));
        for (int k = 0; k < 50 * kPhaseOneCap && slow.residual > target; ++k) {
            ++iterations;
            slow = evaluate(op, normalize_l2(robust_solve(op, a_max + margin, slow.v, scale)));
        }
        top = slow;
        a1 = top.v;
        if (integrate(a1) < 0.0) a1 = -1.0 * a1;
    }
    if (top.residual > accept || a1.min() <= 0.0) {
        std::ostringstream msg;
        msg << "principal_eigenpair: no convergence after " << iterations << " iterations, best residual "
            << top.residual;
        throw NumericalError(msg.str());
    }
    a1 = l1_normalized(a1);
    const double H = top.rq;
    const double residual = max_abs_difference(op.apply(a1), H * a1);

    // Deterministic start with components along every mode.
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> seed(grid.n());
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x = (grid.node(i) - grid.x_lo()) / grid.length();
        seed[i] = (x - 0.5) + 0.05 * unif(rng);
    }
    Iterate second = dominant_pair(op, Field(grid, std::move(seed)), &a1, H, margin, scale, target, iterations);
    if (second.residual > accept) {
        std::ostringstream msg;
        msg << "principal_eigenpair: deflated iteration for the second eigenvalue did not converge, best residual "
            << second.residual;
        throw NumericalError(msg.str());
    }

    return SpectralSummary{H, std::move(a1), second.rq, l1_normalized(second.v), residual, iterations};
}

double rayleigh_quotient(const SpeciesParams& params, const Field& u) {
    const Grid& grid = u.grid();
    require_same_grid(params.grid(), grid, "rayleigh_quotient");
    double grad = 0.0;
    for (std::size_t i = 0; i + 1 < grid.n(); ++i) {
        const double d = (u[i + 1] - u[i]) / grid.h();
        grad += grid.h() * d * d;
    }
    const double potential = inner_l2(pointwise_product(params.growth, u), u);
    return -(params.m * grad - potential) / inner_l2(u, u);
}

std::optional<double> estimate_H_by_simulation(const SpeciesParams& params, const Grid& grid, double horizon) {
    if (!params.kernel.is_separable()) {
        throw InvalidArgument("estimate_H_by_simulation needs a separable kernel");
    }
    require_same_grid(params.grid(), grid, "estimate_H_by_simulation");
    StepControl ctl;
    ctl.t_end = horizon;
    ctl.dt = 1.0;
    ctl.stationarity_tol = 1e-10;
    ctl.snapshot_every = horizon;
    RunResult run = run_to_stationarity(SimState{0.0, Field::constant(grid, 1.0), std::nullopt}, params, ctl);
    if (integrate(run.state.g1) < kExtinctionMass) return std::nullopt;
    return inner_l2(params.kernel.weight(), run.state.g1);
}

InteractionMatrix interaction_matrix(const DimorphicParams& params, const SpectralSummary& s1,
                                     const SpectralSummary& s2, double eps_det) {
    require_same_grid(params.grid(), s1.A1.grid(), "interaction_matrix");
    require_same_grid(params.grid(), s2.A1.grid(), "interaction_matrix");
    const std::array<const Field*, 2> a{&s1.A1, &s2.A1};
    double mu[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) mu[i][j] = inner_l2(params.kernel(i + 1, j + 1), *a[j]);
    }
    return InteractionMatrix::from_entries(mu[0][0], mu[0][1], mu[1][0], mu[1][1], eps_det);
}

}  // namespace nlv
