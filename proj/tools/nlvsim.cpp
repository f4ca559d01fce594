// nlvsim: command-line driver for the nonlocal competition toolkit.
//
//   nlvsim <subcommand> [--config FILE] [--out DIR] [--set key=value]...
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlv/classifier.hpp"
#include "nlv/dynamics.hpp"
#include "nlv/error.hpp"
#include "nlv/io.hpp"
#include "nlv/scenario.hpp"
#include "nlv/spectral.hpp"
#include "nlv/steady_states.hpp"
#include "nlv/version.hpp"

namespace fs = std::filesystem;
using namespace nlv;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::vector<std::string> sets;
    int species = 1;
    unsigned threads = 0;
};

ScenarioConfig resolve_config(const Options& opt) {
    ScenarioConfig cfg;
    if (!opt.config.empty()) cfg = load_config(opt.config);
    for (const std::string& s : opt.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!opt.out.empty()) cfg.output_dir = opt.out;
    validate_config(cfg);
    return cfg;
}

std::string schema_text() {
    const ScenarioConfig defaults;
    std::ostringstream o;
    o << "\nConfiguration keys (file lines 'key = value', '#' comments; --set overrides):\n";
    for (const auto& k : config_schema()) {
        o << "  " << k.key << " = " << get_setting(defaults, k.key) << "\n      " << k.description << "\n";
    }
    o << "\nExit codes: 0 success, 1 usage/configuration error, 2 numerical failure.\n";
    return o.str();
}

void write_masses_csv(const fs::path& path, const MassTrajectory& m) {
    std::string s = m.rho2 ? "t,rho1,rho2\n" : "t,rho1\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        s += format_double(m.times[i]) + "," + format_double(m.rho1[i]);
        if (m.rho2) s += "," + format_double((*m.rho2)[i]);
        s += "\n";
    }
    write_text_file(path, s);
}

void print_run(const ScenarioResult& r) {
    std::printf("%-10s H1=%.10g H2=%.10g", r.parameter.empty() ? "run" : format_double(r.value).c_str(), r.H1, r.H2);
    if (r.regime) std::printf(" regime=%s d21=%.6g d12=%.6g", to_string(r.regime->regime), r.regime->d21, r.regime->d12);
    if (r.ok()) {
        std::printf(" mass1=%.8g mass2=%.8g stop=%s t=%.6g", r.final_mass1, r.final_mass2, to_string(r.stop_reason),
                    r.t_final);
        std::printf(" agreement=%s\n", r.agreement ? (*r.agreement ? "yes" : "NO") : "n/a");
    } else {
        std::printf(" FAILED: %s\n", r.error.c_str());
    }
    if (r.agreement && !*r.agreement) std::printf("           %s\n", r.discrepancy.c_str());
}

void write_run_files(const fs::path& dir, const std::string& stem, const ScenarioResult& r) {
    if (!r.final_state) return;
    const Field& g1 = r.final_state->g1;
    const Field* g2 = r.final_state->g2 ? &*r.final_state->g2 : nullptr;
    emit_field_csv(dir / (stem + ".csv"), g1, g2);
    std::string title = "densities at t=" + format_double(r.t_final);
    if (!r.parameter.empty()) title += ", " + r.parameter + "=" + format_double(r.value);
    emit_svg_plot(dir / (stem + ".svg"), density_plot(title, g1, g2));
    if (r.masses) write_masses_csv(dir / (stem + "_masses.csv"), *r.masses);
}

int cmd_eigen(const Options& opt) {
    const ScenarioConfig cfg = resolve_config(opt);
    const Grid grid = build_grid(cfg);
    const SpeciesParams sp = build_species(cfg, opt.species, grid);
    const SpectralSummary s = principal_eigenpair(sp, grid);
    std::printf("species%d H=%.15g lambda2=%.15g residual=%.3g iterations=%d\n", opt.species, s.H, s.lambda2,
                s.residual, s.iterations);
    emit_field_csv(cfg.output_dir / ("eigen" + std::to_string(opt.species) + ".csv"), s.A1, &s.second_mode);
    return 0;
}

int cmd_steady(const Options& opt) {
    const ScenarioConfig cfg = resolve_config(opt);
    const Grid grid = build_grid(cfg);
    const SpeciesParams sp = build_species(cfg, opt.species, grid);
    const SpectralSummary s = principal_eigenpair(sp, grid);
    if (s.H <= 0.0) {
        std::printf("species%d H=%.15g <= 0: only the zero steady state\n", opt.species, s.H);
        return 0;
    }
    Field g = Field::constant(grid, 0.0);
    if (sp.kernel.is_separable()) {
        g = *steady_monomorphic_separable(sp, s);
        std::printf("species%d closed form: mass=%.15g max=%.15g residual=%.3g\n", opt.species, integrate(g), g.max(),
                    steady_residual(sp, g));
    } else {
        const FixedPointReport fp = steady_fixed_point(sp, grid);
        g = fp.g;
        std::printf("species%d fixed point: mass=%.15g max=%.15g residual=%.3g iterations=%d delta=%.6g\n",
                    opt.species, integrate(g), g.max(), fp.residual * g.max_abs(), fp.iterations, fp.delta);
    }
    emit_field_csv(cfg.output_dir / ("steady" + std::to_string(opt.species) + ".csv"), g);
    return 0;
}

int cmd_simulate(const Options& opt) {
    ScenarioConfig cfg = resolve_config(opt);
    cfg.step.keep_snapshots = false;
    const ScenarioResult r = run_scenario(cfg);
    print_run(r);
    write_run_files(cfg.output_dir, "final", r);
    emit_summary_json(cfg.output_dir / "summary.json", cfg, {r});
    return 0;
}

int cmd_ode(const Options& opt) {
    const ScenarioConfig cfg = resolve_config(opt);
    const InteractionMatrix mu = InteractionMatrix::from_entries(cfg.ode_mu11, cfg.ode_mu12, cfg.ode_mu21, cfg.ode_mu22);
    const double c1 = cfg.ode_c1, c2 = cfg.ode_c2, lambda = cfg.ode_lambda;
    const MassTrajectory traj = integrate_mass_ode(
        cfg.ode_H1, cfg.ode_H2, mu, {cfg.ode_rho1, cfg.ode_rho2},
        [=](double t) { return std::array<double, 2>{c1 * std::exp(-lambda * t), c2 * std::exp(-lambda * t)}; },
        cfg.ode_t_end);
    std::printf("rho1(%g)=%.12g rho2(%g)=%.12g\n", cfg.ode_t_end, traj.rho1.back(), cfg.ode_t_end, traj.rho2->back());
    if (!mu.degenerate) {
        const RegimeReport rep = classify(cfg.ode_H1, cfg.ode_H2, mu);
        std::printf("regime=%s d21=%.6g d12=%.6g\n", to_string(rep.regime), rep.d21, rep.d12);
        for (const auto& c : predicted_masses(rep, mu).candidates) {
            std::printf("  candidate %s: (%.12g, %.12g)\n", c.label.c_str(), c.mass1, c.mass2);
        }
    }
    write_masses_csv(cfg.output_dir / "ode_masses.csv", traj);
    return 0;
}

int cmd_classify(const Options& opt) {
    const ScenarioConfig cfg = resolve_config(opt);
    const Grid grid = build_grid(cfg);
    const DimorphicParams params = build_dimorphic(cfg, grid);
    const SpectralSummary s1 = principal_eigenpair(params.species1, grid);
    const SpectralSummary s2 = principal_eigenpair(params.species2, grid);
    const InteractionMatrix mu = interaction_matrix(params, s1, s2);
    std::printf("H1=%.12g H2=%.12g\nmu = [[%.12g, %.12g], [%.12g, %.12g]] det=%.6g\n", s1.H, s2.H, mu(1, 1), mu(1, 2),
                mu(2, 1), mu(2, 2), mu.det);
    const RegimeReport rep = classify(s1.H, s2.H, mu);
    std::printf("regime=%s d21=%.10g d12=%.10g band=%.3g\n", to_string(rep.regime), rep.d21, rep.d12,
                rep.tolerance_band);
    if (rep.regime != Regime::DegenerateMu) {
        const SteadyStateSet states = coexistence_state(mu, s1.H, s2.H, s1, s2);
        for (const auto& c : predicted_limit(rep, states).candidates) {
            std::printf("  limit %s: masses (%.12g, %.12g)\n", c.label.c_str(), c.mass1, c.mass2);
            if (c.g1 || c.g2) {
                const Field zero = Field::constant(grid, 0.0);
                const Field f1 = c.g1 ? *c.g1 : zero;
                const Field f2 = c.g2 ? *c.g2 : zero;
                emit_field_csv(cfg.output_dir / ("limit_" + c.label + ".csv"), f1, &f2);
            }
        }
    }
    return 0;
}

int cmd_certify(const Options& opt) {
    const ScenarioConfig cfg = resolve_config(opt);
    const Grid grid = build_grid(cfg);
    const DimorphicParams params = build_dimorphic(cfg, grid);
    const SpectralSummary s1 = principal_eigenpair(params.species1, grid);
    const SpectralSummary s2 = principal_eigenpair(params.species2, grid);
    const InteractionMatrix mu = interaction_matrix(params, s1, s2);
    const SimState init = build_initial_state(cfg, params, s1);
    const Field steady1 = (s1.H / mu(1, 1)) * s1.A1;
    const StabilityCertificate c = certify_basin(init.g1, *init.g2, steady1, params, s1, s2, mu);
    std::printf("C1=%.10g C2=%.10g C=%.10g bound=%.10g holds=%s\n", c.C1, c.C2, c.C, c.bound,
                c.holds ? "true" : "false");
    return 0;
}

int cmd_sweep(const Options& opt) {
    const ScenarioConfig cfg = resolve_config(opt);
    const std::vector<ScenarioResult> results = sweep(cfg, opt.threads);
    for (std::size_t i = 0; i < results.size(); ++i) {
        print_run(results[i]);
        write_run_files(cfg.output_dir, "run_" + std::to_string(i), results[i]);
    }
    emit_summary_json(cfg.output_dir / "summary.json", cfg, results);
    for (const auto& r : results) {
        if (!r.ok()) return 2;
    }
    return 0;
}

int cmd_figure1(const Options& opt) {
    ScenarioConfig cfg = resolve_config(opt);
    if (cfg.sweep_values.empty()) cfg.sweep_values = {0.5, 1.0, 1.7};
    cfg = figure1_config(cfg.species2.growth.a_bar, cfg);
    cfg.sweep_parameter = "species2.growth.a_bar";
    const std::vector<ScenarioResult> results = sweep(cfg, opt.threads);
    for (const auto& r : results) {
        print_run(r);
        write_run_files(cfg.output_dir, "figure1_abar2_" + format_double(r.value), r);
    }
    emit_summary_json(cfg.output_dir / "summary.json", cfg, results);
    for (const auto& r : results) {
        if (!r.ok()) return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal competitive reaction-diffusion toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.footer(schema_text());
    app.require_subcommand(1, 1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "configuration file");
        sub->add_option("--out", opt.out, "output directory (overrides output.dir)");
        sub->add_option("--set", opt.sets, "override a configuration key: key=value (repeatable)");
        return sub;
    };
    auto* eigen = add_common(app.add_subcommand("eigen", "principal eigenpair and second eigenvalue of one type"));
    auto* steady = add_common(app.add_subcommand("steady", "positive steady state of one type"));
    for (auto* s : {eigen, steady}) s->add_option("--species", opt.species, "type index (1 or 2)")->check(CLI::Range(1, 2));
    auto* simulate = add_common(app.add_subcommand("simulate", "run the two-type equation and compare with the classifier"));
    auto* ode = add_common(app.add_subcommand("ode", "integrate the reduced mass ODE (ode.* keys)"));
    auto* cls = add_common(app.add_subcommand("classify", "long-time regime from H1, H2 and mu"));
    auto* certify = add_common(app.add_subcommand("certify", "basin certificate for the configured initial data"));
    auto* sw = add_common(app.add_subcommand("sweep", "one run per sweep.values entry"));
    auto* fig = add_common(app.add_subcommand("figure1", "two-bump family for several a_bar2 values (sweep.values)"));
    for (auto* s : {sw, fig}) s->add_option("--threads", opt.threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*eigen) return cmd_eigen(opt);
        if (*steady) return cmd_steady(opt);
        if (*simulate) return cmd_simulate(opt);
        if (*ode) return cmd_ode(opt);
        if (*cls) return cmd_classify(opt);
        if (*certify) return cmd_certify(opt);
        if (*sw) return cmd_sweep(opt);
        if (*fig) return cmd_figure1(opt);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
