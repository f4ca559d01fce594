// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlv/classifier.hpp"
#include "nlv/dynamics.hpp"
#include "nlv/io.hpp"
#include "nlv/scenario.hpp"
#include "nlv/spectral.hpp"
#include "nlv/steady_states.hpp"
#include "oracles.hpp"

using namespace nlv;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "failed: ";
            else detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SpeciesParams constant_species(const Grid& g, double m, double a, double I) {
    return SpeciesParams(m, Field::constant(g, a), CompetitionKernel::separable(Field::constant(g, I)));
}

// 1. Constant-coefficient logistic.
void logistic(Outcome& out) {
    const auto t0 = Clock::now();
    const Grid g(0.0, 1.0, 401);
    const SpeciesParams p = constant_species(g, 0.01, 0.5, 2.0);
    const SpectralSummary s = principal_eigenpair(p, g);
    const Field bar = *steady_monomorphic_separable(p, s);
    StepControl ctl;
    ctl.t_end = 200.0;
    const RunResult run = run_to_stationarity(SimState{0.0, Field::constant(g, 0.1), std::nullopt}, p, ctl);
    const double sim_err = max_abs_difference(run.state.g1, Field::constant(g, 0.25));
    const double elapsed = seconds_since(t0);
    out.require(std::abs(s.H - 0.5) < 1e-8, "H");
    out.require(max_abs_difference(bar, Field::constant(g, 0.25)) < 1e-8, "steady state");
    out.require(sim_err < 1e-4, "simulation");
    out.require(elapsed < 1.0, "runtime");
    out.detail << (out.pass ? "" : " | ") << "H-0.5=" << s.H - 0.5 << " max|g(T)-0.25|=" << sim_err << " at t=" << run.state.t
               << " time=" << elapsed << "s";
}

// 2. Neumann spectrum of the plain Laplacian.
void neumann_spectrum(Outcome& out) {
    const auto t0 = Clock::now();
    const double exact = -0.01 * std::acos(-1.0) * std::acos(-1.0);
    auto err = [&](std::size_t n) {
        const Grid g(0.0, 1.0, n);
        return std::abs(principal_eigenpair(constant_species(g, 0.01, 0.0, 1.0), g).lambda2 - exact);
    };
    const double e201 = err(201), e401 = err(401);
    const double ratio = e201 / e401;
    const double elapsed = seconds_since(t0);
    out.require(e201 < 1e-4 && e401 < 1e-4, "lambda2 accuracy");
    out.require(ratio > 3.8 && ratio < 4.2, "error ratio");
    out.require(elapsed < 1.0, "runtime");
    out.detail << (out.pass ? "" : " | ") << "err(201)=" << e201 << " err(401)=" << e401 << " ratio=" << ratio
               << " time=" << elapsed << "s";
}

// 3. Extinction when H <= 0.
void extinction(Outcome& out) {
    const Grid g(0.0, 1.0, 201);
    StepControl ctl;
    ctl.t_end = 100.0;
    const RunResult run =
        run_to_stationarity(SimState{0.0, Field::constant(g, 1.0), std::nullopt}, constant_species(g, 0.01, -0.2, 1.0), ctl);
    const double mass = integrate(run.state.g1);
    out.require(mass < 1e-8 && run.state.t <= 100.0, "final mass");
    out.detail << (out.pass ? "" : " | ") << "mass=" << mass << " at t=" << run.state.t << " (" << to_string(run.reason)
               << ")";
}

// 4. Inverse iteration against a dense eigensolve and against simulation.
void eigen_oracles(Outcome& out) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    const Grid g(0.0, 1.0, 201);
    double worst_dense = 0.0, worst_sim = 0.0;
    int positive = 0, fields = 0, rejected = 0;
    while (fields < 20) {
        const auto a = oracle::random_smooth(rng, -0.3, 0.8, 0.5);
        const SpeciesParams p(0.01, Field::from_function(g, a), CompetitionKernel::separable(Field::constant(g, 1.0)));
        const std::vector<double> av(p.growth.values().begin(), p.growth.values().end());
        const double dense = oracle::dense_top_two(0.01, av, 0.0, 1.0).first;
        if (std::abs(dense) < 1e-3) {  // relative comparison needs H away from 0
            ++rejected;
            continue;
        }
        ++fields;
        const SpectralSummary s = principal_eigenpair(p, g);
        worst_dense = std::max(worst_dense, std::abs(s.H - dense) / std::abs(dense));
        if (s.H > 0.0) {
            ++positive;
            const auto est = estimate_H_by_simulation(p, g, 20000.0);
            worst_sim = std::max(worst_sim, est ? std::abs(*est - s.H) / s.H : 1.0);
        }
    }
    const double elapsed = seconds_since(t0);
    out.require(worst_dense < 1e-8, "dense eigensolve");
    out.require(worst_sim < 1e-3, "simulation estimate");
    out.require(elapsed < 30.0, "runtime");
    out.detail << (out.pass ? "" : " | ") << "20 fields (" << positive << " with H>0, " << rejected
               << " redrawn near H=0): max rel err dense=" << worst_dense << " simulation=" << worst_sim
               << " time=" << elapsed << "s";
}

// Slowest linear decay rate of the mass ODE at an equilibrium.
double decay_rate(double H1, double H2, const InteractionMatrix& mu, double r1, double r2) {
    const double j11 = H1 - 2.0 * mu(1, 1) * r1 - mu(1, 2) * r2;
    const double j12 = -mu(1, 2) * r1;
    const double j21 = -mu(2, 1) * r2;
    const double j22 = H2 - mu(2, 1) * r1 - 2.0 * mu(2, 2) * r2;
    const double tr = j11 + j22, det = j11 * j22 - j12 * j21;
    const double disc = tr * tr / 4.0 - det;
    const double top = disc >= 0.0 ? tr / 2.0 + std::sqrt(disc) : tr / 2.0;
    return -top;
}

// 5. Limit table of the reduced mass ODE.
void mass_ode_table(Outcome& out) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uh(0.1, 1.5), um(0.2, 1.5), uc(-0.5, 0.5), ul(0.2, 2.0), ur(0.05, 1.0),
        coin(0.0, 1.0);
    const std::array<Regime, 5> wanted{Regime::Extinction, Regime::Fixation1, Regime::Fixation2, Regime::Coexistence,
                                       Regime::Bistable};
    std::array<int, 5> count{};
    int failures = 0, bistable_to_1 = 0, bistable_to_2 = 0;
    double worst = 0.0;
    std::string first_failure;
    long draws = 0;
    while (*std::min_element(count.begin(), count.end()) < 40 && draws < 5000000) {
        ++draws;
        const double H1 = (coin(rng) < 0.7 ? 1.0 : -1.0) * uh(rng);
        const double H2 = (coin(rng) < 0.7 ? 1.0 : -1.0) * uh(rng);
        const auto mu = InteractionMatrix::from_entries(um(rng), um(rng), um(rng), um(rng));
        if (mu.degenerate || std::abs(mu.det) < 0.05) continue;
        const RegimeReport rep = classify(H1, H2, mu);
        const auto slot = std::find(wanted.begin(), wanted.end(), rep.regime) - wanted.begin();
        if (slot == static_cast<long>(wanted.size()) || count[slot] >= 40) continue;
        if (std::abs(rep.d21) < 0.05 || std::abs(rep.d12) < 0.05) continue;
        const PredictedLimit pred = predicted_masses(rep, mu);
        bool fast = true;
        for (const auto& c : pred.candidates) {
            if (rep.regime == Regime::Bistable && c.label == "coexistence") continue;
            fast = fast && decay_rate(H1, H2, mu, c.mass1, c.mass2) >= 0.05;
        }
        if (!fast) continue;
        ++count[slot];

        const double c1 = uc(rng), c2 = uc(rng), lambda = ul(rng);
        const MassTrajectory t = integrate_mass_ode(
            H1, H2, mu, {ur(rng), ur(rng)},
            [=](double s) { return std::array<double, 2>{c1 * std::exp(-lambda * s), c2 * std::exp(-lambda * s)}; },
            500.0, 500.0);
        const double r1 = t.rho1.back(), r2 = t.rho2->back();
        double best = 1e300;
        std::string best_label;
        for (const auto& c : pred.candidates) {
            if (rep.regime == Regime::Bistable && c.label == "coexistence") continue;
            const double e = std::max(std::abs(r1 - c.mass1), std::abs(r2 - c.mass2));
            if (e < best) {
                best = e;
                best_label = c.label;
            }
        }
        if (rep.regime == Regime::Bistable) (best_label == "pure1" ? bistable_to_1 : bistable_to_2) += best < 1e-3;
        worst = std::max(worst, best);
        if (best >= 1e-3) {
            ++failures;
            if (first_failure.empty()) first_failure = std::string(to_string(rep.regime));
        }
    }
    const double elapsed = seconds_since(t0);
    const int total = count[0] + count[1] + count[2] + count[3] + count[4];
    out.require(total == 200, "instance generation");
    out.require(failures == 0, "limits (first miss: " + first_failure + ")");
    out.require(elapsed < 60.0, "runtime");
    out.detail << (out.pass ? "" : " | ") << total << " instances (40 per regime), max |rho(500)-limit|=" << worst
               << ", bistable landed on pure1/pure2: " << bistable_to_1 << "/" << bistable_to_2 << " time=" << elapsed
               << "s";
}

// Regression constants: a_bar2 where d21 and d12 change sign (n = 201).
constexpr double kThresholdCoexistence = 0.767119062060;
constexpr double kThresholdInvasion = 1.361152878306;

double locate_threshold(bool first, double lo, double hi) {
    auto disc = [&](double ab) {
        const ScenarioConfig cfg = figure1_config(ab);
        const Grid g = build_grid(cfg);
        const DimorphicParams p = build_dimorphic(cfg, g);
        const auto s1 = principal_eigenpair(p.species1, g);
        const auto s2 = principal_eigenpair(p.species2, g);
        const RegimeReport r = classify(s1.H, s2.H, interaction_matrix(p, s1, s2));
        return first ? r.d21 : -r.d12;  // both increase through zero
    };
    for (int k = 0; k < 50; ++k) {
        const double mid = 0.5 * (lo + hi);
        (disc(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<ScenarioResult> g_sweep;

// 6. Two-bump family sweep.
void figure1_sweep(Outcome& out) {
    const auto t0 = Clock::now();
    ScenarioConfig cfg;
    cfg.sweep_parameter = "species2.growth.a_bar";
    cfg.sweep_values = parse_value_list("0.2:2.0:0.2");
    g_sweep = sweep(cfg);
    std::vector<int> stage;
    std::ostringstream seq;
    bool all_agree = true, outcomes_ok = true;
    for (const auto& r : g_sweep) {
        if (!r.ok() || !r.regime) {
            all_agree = false;
            seq << " " << r.value << ":error";
            continue;
        }
        const Regime reg = r.regime->regime;
        seq << " " << r.value << ":" << to_string(reg);
        const bool marginal = reg == Regime::MarginalPure1Stable || reg == Regime::MarginalPure2Stable ||
                              reg == Regime::DegenerateMu;
        if (!marginal && r.agreement != true) all_agree = false;
        if (reg == Regime::Fixation1) {
            stage.push_back(0);
            outcomes_ok = outcomes_ok && r.final_mass2 < 1e-4;
        } else if (reg == Regime::Coexistence) {
            stage.push_back(1);
        } else if (reg == Regime::Fixation2) {
            stage.push_back(2);
            outcomes_ok = outcomes_ok && r.final_mass1 < 1e-4 && r.final_mass2 > 0.0;
        } else {
            stage.push_back(-1);
        }
    }
    const bool monotone = std::is_sorted(stage.begin(), stage.end()) && !stage.empty() && stage.front() >= 0;
    const bool all_three = std::find(stage.begin(), stage.end(), 0) != stage.end() &&
                           std::find(stage.begin(), stage.end(), 1) != stage.end() &&
                           std::find(stage.begin(), stage.end(), 2) != stage.end();
    const double thr1 = locate_threshold(true, 0.6, 0.9);
    const double thr2 = locate_threshold(false, 1.2, 1.5);
    const double elapsed = seconds_since(t0);
    out.require(all_agree, "masses vs prediction within 2%");
    out.require(monotone && all_three, "progression extinct -> coexistence -> invasion");
    out.require(outcomes_ok, "mutant extinct / resident extinct in the end regimes");
    out.require(std::abs(thr1 - kThresholdCoexistence) < 1e-6 && std::abs(thr2 - kThresholdInvasion) < 1e-6,
                "pinned thresholds");
    out.require(elapsed < 300.0, "runtime");
    out.detail << (out.pass ? "" : " | ") << "regimes:" << seq.str() << "; thresholds a_bar2=" << thr1 << ", " << thr2
               << " time=" << elapsed << "s";
}

// 7. Coexistence masses equal the linear-system solution.
void coexistence_masses(Outcome& out) {
    int n = 0;
    double worst = 0.0;
    for (const auto& r : g_sweep) {
        if (!r.ok() || !r.regime || r.regime->regime != Regime::Coexistence) continue;
        ++n;
        const auto& c = r.prediction->candidates.front();
        worst = std::max({worst, std::abs(r.final_mass1 - c.mass1) / c.mass1, std::abs(r.final_mass2 - c.mass2) / c.mass2});
    }
    out.require(n > 0, "no coexistence runs");
    out.require(worst < 0.01, "relative mass error");
    out.detail << (out.pass ? "" : " | ") << n << " coexistence runs, max relative error " << worst;
}

// 8. Fixed-point steady state for a general kernel.
void general_kernel(Outcome& out) {
    const auto t0 = Clock::now();
    const Grid g(0.0, 1.0, 201);
    const SpeciesParams bil(0.01, Field::constant(g, 0.5),
                            CompetitionKernel::general(g, [](double x, double y) { return 1.0 + x * y; }));
    const FixedPointReport fp = steady_fixed_point(bil, g);
    const double res = steady_residual(bil, fp.g);

    double worst_sep = 0.0;
    const std::vector<SpeciesParams> separable{
        SpeciesParams(0.01, Field::constant(g, 0.5),
                      CompetitionKernel::separable(Field::from_function(g, [](double y) { return 1.0 + y; }))),
        SpeciesParams(0.01, build_growth_figure1(0.3, 1.0, g), CompetitionKernel::separable(build_kernel_figure1(0.3, g)))};
    for (const auto& sp : separable) {
        const Field closed = *steady_monomorphic_separable(sp, principal_eigenpair(sp, g));
        const Field fixed = steady_fixed_point_general(SpeciesParams(sp.m, sp.growth, sp.kernel.as_general()), g);
        worst_sep = std::max(worst_sep, max_abs_difference(closed, fixed));
    }
    const double elapsed = seconds_since(t0);
    out.require(res < 1e-6, "residual");
    out.require(worst_sep < 1e-6, "separable closed form");
    out.require(elapsed < 5.0, "runtime");
    out.detail << (out.pass ? "" : " | ") << "residual=" << res << " (" << fp.iterations
               << " iterations), separable max diff=" << worst_sep << " time=" << elapsed << "s";
}

// Random configuration with strong cross competition (bistable when the H are comparable).
struct Bistable {
    DimorphicParams params;
    SpectralSummary s1, s2;
    InteractionMatrix mu;
    RegimeReport report;
};

Bistable random_bistable(std::mt19937_64& rng, const Grid& g) {
    std::uniform_real_distribution<double> v(0.3, 1.0), amp(-0.4, 0.4), m(0.005, 0.05), k(1.5, 3.0), self(0.7, 1.3);
    while (true) {
        auto growth = [&] {
            const double c = v(rng), a = amp(rng), kk = static_cast<double>(1 + rng() % 2);
            const double pi = std::acos(-1.0);
            return Field::from_function(g, [=](double x) { return c + a * std::cos(kk * pi * x); });
        };
        const SpeciesParams s1(m(rng), growth(), CompetitionKernel::separable(Field::constant(g, self(rng))));
        const SpeciesParams s2(m(rng), growth(), CompetitionKernel::separable(Field::constant(g, self(rng))));
        const DimorphicParams p(s1, s2, Field::constant(g, k(rng)), Field::constant(g, k(rng)));
        auto e1 = principal_eigenpair(p.species1, g);
        auto e2 = principal_eigenpair(p.species2, g);
        const auto mu = interaction_matrix(p, e1, e2);
        const auto rep = classify(e1.H, e2.H, mu);
        if (rep.regime == Regime::Bistable && rep.d21 < -0.05 && rep.d12 < -0.05) {
            return Bistable{p, std::move(e1), std::move(e2), mu, rep};
        }
    }
}

// 9. Certificate soundness.
void certificate(Outcome& out) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> eps(-0.05, 0.05), mass(1e-4, 1e-2), center(0.1, 0.9);
    const Grid g(0.0, 1.0, 101);
    int attempts = 0, certified = 0, converged = 0;
    double worst_mass2 = 0.0;
    while (certified < 25 && attempts < 400) {
        ++attempts;
        const Bistable b = random_bistable(rng, g);
        const Field bar1 = (b.s1.H / b.mu(1, 1)) * b.s1.A1;
        const double e = eps(rng);
        const double pi = std::acos(-1.0);
        const Field g10 = pointwise_product(bar1, Field::from_function(g, [&](double x) { return 1.0 + e * std::cos(pi * x); }));
        const Field g20 = gaussian_bump(g, center(rng), 0.05, mass(rng));
        const StabilityCertificate c = certify_basin(g10, g20, bar1, b.params, b.s1, b.s2, b.mu);
        if (!c.holds) continue;
        ++certified;
        StepControl ctl;
        ctl.t_end = 5000.0;
        const RunResult run = run_to_stationarity(SimState{0.0, g10, g20}, b.params, ctl);
        const double m2 = integrate(*run.state.g2);
        const double m1 = integrate(run.state.g1);
        worst_mass2 = std::max(worst_mass2, m2);
        if (run.reason == StopReason::Stationary && m2 < 1e-6 && std::abs(m1 - b.s1.H / b.mu(1, 1)) < 1e-3 * m1) {
            ++converged;
        }
    }
    const double elapsed = seconds_since(t0);
    out.require(certified >= 20, "too few certified configurations");
    out.require(converged == certified, "certified run did not converge to the pure type-1 state");
    out.detail << (out.pass ? "" : " | ") << certified << " certified of " << attempts << " bistable draws, " << converged
               << " converged to (g1bar, 0), max final type-2 mass " << worst_mass2 << " time=" << elapsed << "s";
}

// 10. Both pure states attract in a bistable configuration.
void bistability(Outcome& out) {
    const Grid g(0.0, 1.0, 201);
    const double pi = std::acos(-1.0);
    const SpeciesParams s1(0.01, Field::from_function(g, [&](double x) { return 0.8 + 0.3 * std::cos(pi * x); }),
                           CompetitionKernel::separable(Field::constant(g, 1.0)));
    const SpeciesParams s2(0.01, Field::from_function(g, [&](double x) { return 0.7 - 0.3 * std::cos(pi * x); }),
                           CompetitionKernel::separable(Field::constant(g, 1.0)));
    const DimorphicParams p(s1, s2, Field::constant(g, 2.0), Field::constant(g, 2.0));
    const auto e1 = principal_eigenpair(p.species1, g);
    const auto e2 = principal_eigenpair(p.species2, g);
    const auto mu = interaction_matrix(p, e1, e2);
    const auto rep = classify(e1.H, e2.H, mu);
    out.require(rep.regime == Regime::Bistable, "configuration is not bistable");
    const Field bar1 = (e1.H / mu(1, 1)) * e1.A1;
    const Field bar2 = (e2.H / mu(2, 2)) * e2.A1;
    StepControl ctl;
    ctl.t_end = 5000.0;
    const RunResult a = run_to_stationarity(SimState{0.0, bar1, gaussian_bump(g, 0.5, 0.05, 1e-2)}, p, ctl);
    const RunResult b = run_to_stationarity(SimState{0.0, gaussian_bump(g, 0.5, 0.05, 1e-2), bar2}, p, ctl);
    const double a1 = integrate(a.state.g1), a2 = integrate(*a.state.g2);
    const double b1 = integrate(b.state.g1), b2 = integrate(*b.state.g2);
    out.require(std::abs(a1 - integrate(bar1)) < 1e-3 * a1 && a2 < 1e-6, "type-1-dominant start");
    out.require(std::abs(b2 - integrate(bar2)) < 1e-3 * b2 && b1 < 1e-6, "type-2-dominant start");
    out.require(max_abs_difference(a.state.g1, b.state.g1) > 0.1, "limits not distinct");
    out.detail << (out.pass ? "" : " | ") << "H1=" << e1.H << " H2=" << e2.H << " d21=" << rep.d21 << " d12=" << rep.d12
               << "; start A -> masses (" << a1 << ", " << a2 << "), start B -> (" << b1 << ", " << b2 << ")";
}

// 11. Property suites.
void properties(Outcome& out) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0), h(-1.0, 1.0), m(0.0, 2.0), c(0.1, 10.0);
    const Grid g(0.0, 1.0, 81);

    bool positivity = true, normalized = true;
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = oracle::random_smooth(rng, -0.3, 0.8, 1.0);
        const SpeciesParams p(0.01, Field::from_function(g, a), CompetitionKernel::separable(Field::constant(g, 1.0)));
        const auto s = principal_eigenpair(p, g);
        normalized = normalized && s.A1.min() > 0.0 && std::abs(integrate(s.A1) - 1.0) < 1e-12;
        std::vector<double> v(g.n());
        for (auto& x : v) x = u(rng) < 0.3 ? 0.0 : 2.0 * u(rng);
        const DimorphicParams dp(p, p, Field::constant(g, 1.5), Field::constant(g, 0.5));
        StepControl ctl;
        ctl.t_end = 30.0;
        ctl.dt = 0.5;
        ctl.keep_snapshots = true;
        const auto run = run_to_stationarity(SimState{0.0, Field(g, v), Field(g, std::vector<double>(v.rbegin(), v.rend()))},
                                             dp, ctl);
        for (const auto& snap : run.snapshots) positivity = positivity && snap.g1.min() >= 0.0 && snap.g2->min() >= 0.0;
    }
    out.require(positivity, "positivity");
    out.require(normalized, "L1 normalization");

    bool swap_ok = true, scale_ok = true;
    auto swapped = [](Regime r) {
        switch (r) {
            case Regime::Fixation1: return Regime::Fixation2;
            case Regime::Fixation2: return Regime::Fixation1;
            case Regime::MarginalPure1Stable: return Regime::MarginalPure2Stable;
            case Regime::MarginalPure2Stable: return Regime::MarginalPure1Stable;
            default: return r;
        }
    };
    for (int trial = 0; trial < 100000; ++trial) {
        const double H1 = h(rng), H2 = h(rng);
        const double a = m(rng) + 1e-3, b = m(rng), cc = m(rng), d = m(rng) + 1e-3;
        const Regime r = classify(H1, H2, InteractionMatrix::from_entries(a, b, cc, d)).regime;
        swap_ok = swap_ok && classify(H2, H1, InteractionMatrix::from_entries(d, cc, b, a)).regime == swapped(r);
        const double s = c(rng);
        scale_ok = scale_ok && classify(H1, H2, InteractionMatrix::from_entries(s * a, s * b, s * cc, s * d)).regime == r;
    }
    out.require(swap_ok, "species-swap equivariance");
    out.require(scale_ok, "kernel-scaling invariance");

    bool csv_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(g.n()), b(g.n());
        for (auto& x : a) x = std::exp(-30.0 * u(rng));
        for (auto& x : b) x = u(rng) / 7.0;
        const Field f1(g, a), f2(g, b);
        const FieldTable t = parse_field_csv(format_field_csv(f1, &f2));
        csv_ok = csv_ok && t.g1 == a && t.g2 && *t.g2 == b;
    }
    out.require(csv_ok, "CSV round trip");

    const Field f1 = Field::from_function(g, [](double x) { return std::sin(3 * x); });
    const Field f2 = Field::from_function(g, [](double x) { return x / 3.0; });
    ScenarioConfig cfg;
    ScenarioResult r;
    r.H1 = 0.1;
    r.mu = InteractionMatrix::from_entries(1.0, 0.5, 0.5, 1.0);
    r.regime = classify(1.0, 1.0, *r.mu);
    r.prediction = predicted_masses(*r.regime, *r.mu);
    const bool det = format_field_csv(f1, &f2) == format_field_csv(f1, &f2) &&
                     format_svg_plot(density_plot("t", f1, &f2)) == format_svg_plot(density_plot("t", f1, &f2)) &&
                     format_summary_json(cfg, {r}, false) == format_summary_json(cfg, {r}, false);
    out.require(det, "deterministic emission");
    out.detail << (out.pass ? "" : " | ")
               << "positivity, L1 normalization, swap equivariance (1e5), scaling invariance (1e5), CSV round trip, "
                  "deterministic emission";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "constant-coefficient logistic", logistic},
        {2, "Neumann spectrum", neumann_spectrum},
        {3, "extinction for H <= 0", extinction},
        {4, "eigen-oracle equivalence", eigen_oracles},
        {5, "mass ODE limit table", mass_ode_table},
        {6, "two-bump sweep vs classifier", figure1_sweep},
        {7, "coexistence mass identity", coexistence_masses},
        {8, "general-kernel steady state", general_kernel},
        {9, "basin certificate soundness", certificate},
        {10, "bistability realized", bistability},
        {11, "property suites", properties},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome out;
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << " exception: " << e.what();
        }
        std::printf("[%s] %2d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.str().c_str());
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
