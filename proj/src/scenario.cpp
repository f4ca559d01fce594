#include "nlv/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <thread>

#include <json.hpp>

#include "nlv/error.hpp"
#include "nlv/io.hpp"
#include "nlv/steady_states.hpp"
#include "nlv/version.hpp"

namespace nlv {

ScenarioConfig::ScenarioConfig() {
    species2.growth.u = 0.5;
    species2.kernel.u = 0.5;
}

namespace {

struct Entry {
    std::string key;
    std::string description;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <class Acc>
Entry number(std::string key, std::string desc, Acc acc) {
    return Entry{key, std::move(desc),
                 [acc, key](ScenarioConfig& c, std::string_view v) { acc(c) = parse_double(v, key); },
                 [acc](const ScenarioConfig& c) { return format_double(acc(const_cast<ScenarioConfig&>(c))); }};
}

template <class Acc>
Entry choice(std::string key, std::string desc, std::vector<std::string> allowed, Acc acc) {
    return Entry{key, std::move(desc),
                 [acc, key, allowed](ScenarioConfig& c, std::string_view v) {
                     if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
                         std::string list;
                         for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                         throw ConfigError(key + ": '" + std::string(v) + "' is not one of {" + list + "}");
                     }
                     acc(c) = std::string(v);
                 },
                 [acc](const ScenarioConfig& c) { return acc(const_cast<ScenarioConfig&>(c)); }};
}

bool parse_bool(std::string_view v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": '" + std::string(v) + "' is not a boolean");
}

void species_entries(std::vector<Entry>& out, int which) {
    const std::string p = "species" + std::to_string(which) + ".";
    auto sp = [which](ScenarioConfig& c) -> SpeciesSpec& { return which == 1 ? c.species1 : c.species2; };
    out.push_back(number(p + "m", "diffusion rate (> 0)", [sp](ScenarioConfig& c) -> double& { return sp(c).m; }));
    out.push_back(choice(p + "growth.type", "figure1 | constant | cosine", {"figure1", "constant", "cosine"},
                         [sp](ScenarioConfig& c) -> std::string& { return sp(c).growth.type; }));
    out.push_back(number(p + "growth.u", "figure1: center of the growth bump",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).growth.u; }));
    out.push_back(number(p + "growth.a_bar", "figure1: peak growth rate, a = max{a_bar (1 - 20 (x-u)^2), -1}",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).growth.a_bar; }));
    out.push_back(number(p + "growth.value", "constant level (also the cosine mean)",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).growth.value; }));
    out.push_back(number(p + "growth.amplitude", "cosine: a = value + amplitude cos(k pi (x - x_lo) / L)",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).growth.amplitude; }));
    out.push_back(number(p + "growth.k", "cosine: wave number",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).growth.k; }));
    out.push_back(choice(p + "kernel.type", "window | constant | bilinear (general, monomorphic only)",
                         {"window", "constant", "bilinear"},
                         [sp](ScenarioConfig& c) -> std::string& { return sp(c).kernel.type; }));
    out.push_back(number(p + "kernel.u", "window: center",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).kernel.u; }));
    out.push_back(number(p + "kernel.half_width", "window: half width",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).kernel.half_width; }));
    out.push_back(number(p + "kernel.inside", "window: value where |y - u| < half_width",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).kernel.inside; }));
    out.push_back(number(p + "kernel.outside", "window: value elsewhere",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).kernel.outside; }));
    out.push_back(number(p + "kernel.value", "constant kernel value",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).kernel.value; }));
    out.push_back(number(p + "kernel.c0", "bilinear: I(x, y) = c0 + c1 x y",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).kernel.c0; }));
    out.push_back(number(p + "kernel.c1", "bilinear: coefficient of x y",
                         [sp](ScenarioConfig& c) -> double& { return sp(c).kernel.c1; }));
}

std::vector<Entry> build_entries() {
    std::vector<Entry> e;
    e.push_back(number("grid.x_lo", "left end of the domain", [](ScenarioConfig& c) -> double& { return c.x_lo; }));
    e.push_back(number("grid.x_hi", "right end of the domain", [](ScenarioConfig& c) -> double& { return c.x_hi; }));
    e.push_back(Entry{"grid.n", "number of nodes (>= 3)",
                      [](ScenarioConfig& c, std::string_view v) {
                          const double d = parse_double(v, "grid.n");
                          if (!(d >= 3.0) || d != std::floor(d) || d > 1e7) {
                              throw ConfigError("grid.n: must be an integer >= 3");
                          }
                          c.n = static_cast<std::size_t>(d);
                      },
                      [](const ScenarioConfig& c) { return std::to_string(c.n); }});
    species_entries(e, 1);
    species_entries(e, 2);
    e.push_back(choice("cross.type", "min (pointwise min of I11, I22) | constant", {"min", "constant"},
                       [](ScenarioConfig& c) -> std::string& { return c.cross_type; }));
    e.push_back(number("cross.value12", "constant I12", [](ScenarioConfig& c) -> double& { return c.cross12; }));
    e.push_back(number("cross.value21", "constant I21", [](ScenarioConfig& c) -> double& { return c.cross21; }));
    e.push_back(choice("initial.type", "resident_plus_mutant | constant", {"resident_plus_mutant", "constant"},
                       [](ScenarioConfig& c) -> std::string& { return c.initial_type; }));
    e.push_back(number("initial.mutant_mass", "mass of the type-2 Gaussian bump",
                       [](ScenarioConfig& c) -> double& { return c.mutant_mass; }));
    e.push_back(number("initial.mutant_center", "center of the bump",
                       [](ScenarioConfig& c) -> double& { return c.mutant_center; }));
    e.push_back(number("initial.mutant_width", "standard deviation of the bump",
                       [](ScenarioConfig& c) -> double& { return c.mutant_width; }));
    e.push_back(number("initial.value1", "constant: type-1 density", [](ScenarioConfig& c) -> double& { return c.initial1; }));
    e.push_back(number("initial.value2", "constant: type-2 density", [](ScenarioConfig& c) -> double& { return c.initial2; }));
    e.push_back(number("step.dt", "time step upper bound", [](ScenarioConfig& c) -> double& { return c.step.dt; }));
    e.push_back(number("step.t_end", "final time", [](ScenarioConfig& c) -> double& { return c.step.t_end; }));
    e.push_back(number("step.stationarity_tol", "stop when max|dg|/dt falls below this",
                       [](ScenarioConfig& c) -> double& { return c.step.stationarity_tol; }));
    e.push_back(number("step.snapshot_every", "mass recording interval",
                       [](ScenarioConfig& c) -> double& { return c.step.snapshot_every; }));
    e.push_back(Entry{"output.dir", "directory for CSV, SVG and JSON output",
                      [](ScenarioConfig& c, std::string_view v) { c.output_dir = std::string(v); },
                      [](const ScenarioConfig& c) { return c.output_dir.string(); }});
    e.push_back(Entry{"sweep.parameter", "key varied by the sweep",
                      [](ScenarioConfig& c, std::string_view v) { c.sweep_parameter = std::string(v); },
                      [](const ScenarioConfig& c) { return c.sweep_parameter; }});
    e.push_back(Entry{"sweep.values", "a:b:step (inclusive) or comma separated list",
                      [](ScenarioConfig& c, std::string_view v) { c.sweep_values = parse_value_list(v); },
                      [](const ScenarioConfig& c) {
                          std::string s;
                          for (double v : c.sweep_values) s += (s.empty() ? "" : ",") + format_double(v);
                          return s;
                      }});
    e.push_back(Entry{"classify.enabled", "run the classifier and compare with it",
                      [](ScenarioConfig& c, std::string_view v) { c.classify_enabled = parse_bool(v, "classify.enabled"); },
                      [](const ScenarioConfig& c) { return std::string(c.classify_enabled ? "true" : "false"); }});
    e.push_back(number("validate.tol", "relative tolerance of the mass comparison",
                       [](ScenarioConfig& c) -> double& { return c.validate_tol; }));
    e.push_back(number("ode.H1", "mass ODE: growth of type 1", [](ScenarioConfig& c) -> double& { return c.ode_H1; }));
    e.push_back(number("ode.H2", "mass ODE: growth of type 2", [](ScenarioConfig& c) -> double& { return c.ode_H2; }));
    e.push_back(number("ode.mu11", "mass ODE: competition 1 on 1", [](ScenarioConfig& c) -> double& { return c.ode_mu11; }));
    e.push_back(number("ode.mu12", "mass ODE: competition of 2 on 1", [](ScenarioConfig& c) -> double& { return c.ode_mu12; }));
    e.push_back(number("ode.mu21", "mass ODE: competition of 1 on 2", [](ScenarioConfig& c) -> double& { return c.ode_mu21; }));
    e.push_back(number("ode.mu22", "mass ODE: competition 2 on 2", [](ScenarioConfig& c) -> double& { return c.ode_mu22; }));
    e.push_back(number("ode.rho1", "mass ODE: initial type-1 mass", [](ScenarioConfig& c) -> double& { return c.ode_rho1; }));
    e.push_back(number("ode.rho2", "mass ODE: initial type-2 mass", [](ScenarioConfig& c) -> double& { return c.ode_rho2; }));
    e.push_back(number("ode.c1", "mass ODE: perturbation c1 exp(-lambda t)", [](ScenarioConfig& c) -> double& { return c.ode_c1; }));
    e.push_back(number("ode.c2", "mass ODE: perturbation c2 exp(-lambda t)", [](ScenarioConfig& c) -> double& { return c.ode_c2; }));
    e.push_back(number("ode.lambda", "mass ODE: perturbation decay rate", [](ScenarioConfig& c) -> double& { return c.ode_lambda; }));
    e.push_back(number("ode.t_end", "mass ODE: final time", [](ScenarioConfig& c) -> double& { return c.ode_t_end; }));
    return e;
}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = build_entries();
    return table;
}

const Entry& find_entry(std::string_view key) {
    for (const auto& e : entries()) {
        if (e.key == key) return e;
    }
    std::vector<std::string> keys;
    for (const auto& e : entries()) keys.push_back(e.key);
    std::string msg = "unknown configuration key '" + std::string(key) + "'";
    if (const std::string near = nearest_key(key, keys); !near.empty()) msg += " (did you mean '" + near + "'?)";
    throw ConfigError(msg);
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
    static const std::vector<ConfigKey> schema = [] {
        std::vector<ConfigKey> s;
        for (const auto& e : entries()) s.push_back({e.key, e.description});
        return s;
    }();
    return schema;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
    find_entry(key).set(cfg, value);
}

std::string get_setting(const ScenarioConfig& cfg, std::string_view key) { return find_entry(key).get(cfg); }

std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : entries()) out.emplace_back(e.key, e.get(cfg));
    return out;
}

ScenarioConfig config_from_text(std::string_view text, std::string_view source) {
    ScenarioConfig cfg;
    for (const auto& [k, v] : parse_key_values(text, source)) apply_setting(cfg, k, v);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file '" + path.string() + "' does not exist");
    return config_from_text(read_text_file(path), path.string());
}

std::vector<double> parse_value_list(std::string_view text) {
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        while (true) {
            const auto colon = text.find(':', start);
            parts.push_back(parse_double(text.substr(start, colon == std::string_view::npos ? colon : colon - start),
                                         "value range"));
            if (colon == std::string_view::npos) break;
            start = colon + 1;
        }
        if (parts.size() != 3) throw ConfigError("value range: expected a:b:step");
        const double a = parts[0], b = parts[1], step = parts[2];
        if (!(step > 0.0) || b < a) throw ConfigError("value range: need step > 0 and b >= a");
        const double count = std::floor((b - a) / step + 1e-9);
        if (count > 1e6) throw ConfigError("value range: too many values");
        for (long k = 0; k <= static_cast<long>(count); ++k) {
            // Rounded to 12 significant digits so 0.2:2.0:0.1 gives 0.3 rather than 0.30000000000000004.
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", a + static_cast<double>(k) * step);
            out.push_back(parse_double(buf, "value range"));
        }
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto piece = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
            if (piece.find_first_not_of(" \t") != std::string_view::npos) out.push_back(parse_double(piece, "value list"));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    for (double v : out) {
        if (!std::isfinite(v)) throw ConfigError("value list: values must be finite");
    }
    return out;
}

void validate_config(const ScenarioConfig& cfg) {
    if (!(cfg.x_hi > cfg.x_lo)) throw ConfigError("grid: x_hi must exceed x_lo");
    if (cfg.n < 3) throw ConfigError("grid.n: must be >= 3");
    for (int i = 1; i <= 2; ++i) {
        const SpeciesSpec& s = i == 1 ? cfg.species1 : cfg.species2;
        const std::string p = "species" + std::to_string(i);
        if (!(s.m > 0.0)) throw ConfigError(p + ".m: must be positive");
        if (s.kernel.type == "window" && !(s.kernel.half_width > 0.0)) {
            throw ConfigError(p + ".kernel.half_width: must be positive");
        }
    }
    if (cfg.cross_type == "constant" && (cfg.cross12 < 0.0 || cfg.cross21 < 0.0)) {
        throw ConfigError("cross.value12/value21: must be nonnegative");
    }
    if (cfg.initial_type == "resident_plus_mutant") {
        if (cfg.mutant_mass < 0.0) throw ConfigError("initial.mutant_mass: must be nonnegative");
        if (!(cfg.mutant_width > 0.0)) throw ConfigError("initial.mutant_width: must be positive");
    } else if (cfg.initial1 < 0.0 || cfg.initial2 < 0.0) {
        throw ConfigError("initial.value1/value2: must be nonnegative");
    }
    if (!(cfg.validate_tol > 0.0)) throw ConfigError("validate.tol: must be positive");
    try {
        cfg.step.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("step: ") + e.what());
    }
}

Grid build_grid(const ScenarioConfig& cfg) {
    validate_config(cfg);
    return Grid(cfg.x_lo, cfg.x_hi, cfg.n);
}

namespace {

Field build_growth(const GrowthSpec& g, const Grid& grid) {
    if (g.type == "figure1") return build_growth_figure1(g.u, g.a_bar, grid);
    if (g.type == "constant") return Field::constant(grid, g.value);
    const double pi = std::acos(-1.0);
    return Field::from_function(grid, [&](double x) {
        return g.value + g.amplitude * std::cos(g.k * pi * (x - grid.x_lo()) / grid.length());
    });
}

CompetitionKernel build_kernel(const KernelSpec& k, const Grid& grid) {
    if (k.type == "window") {
        return CompetitionKernel::separable(Field::from_function(
            grid, [&](double y) { return std::abs(y - k.u) < k.half_width ? k.inside : k.outside; }));
    }
    if (k.type == "constant") return CompetitionKernel::separable(Field::constant(grid, k.value));
    return CompetitionKernel::general(grid, [&](double x, double y) { return k.c0 + k.c1 * x * y; });
}

}  // namespace

SpeciesParams build_species(const ScenarioConfig& cfg, int which, const Grid& grid) {
    if (which != 1 && which != 2) throw InvalidArgument("build_species: species index must be 1 or 2");
    const SpeciesSpec& s = which == 1 ? cfg.species1 : cfg.species2;
    return SpeciesParams(s.m, build_growth(s.growth, grid), build_kernel(s.kernel, grid));
}

DimorphicParams build_dimorphic(const ScenarioConfig& cfg, const Grid& grid) {
    SpeciesParams s1 = build_species(cfg, 1, grid);
    SpeciesParams s2 = build_species(cfg, 2, grid);
    if (!s1.kernel.is_separable() || !s2.kernel.is_separable()) {
        throw ConfigError("the two-type system needs separable self kernels (window or constant)");
    }
    Field c12 = Field::constant(grid, cfg.cross12);
    Field c21 = Field::constant(grid, cfg.cross21);
    if (cfg.cross_type == "min") {
        c12 = pointwise_min(s1.kernel.weight(), s2.kernel.weight());
        c21 = c12;
    }
    return DimorphicParams(std::move(s1), std::move(s2), std::move(c12), std::move(c21));
}

Field gaussian_bump(const Grid& grid, double center, double width, double mass) {
    if (!(width > 0.0)) throw InvalidArgument("gaussian_bump: width must be positive");
    const Field shape = Field::from_function(grid, [&](double x) {
        const double z = (x - center) / width;
        return std::exp(-0.5 * z * z);
    });
    const double total = integrate(shape);
    if (!(total > 0.0)) throw InvalidArgument("gaussian_bump: bump has no mass on the grid");
    return (mass / total) * shape;
}

SimState build_initial_state(const ScenarioConfig& cfg, const DimorphicParams& params, const SpectralSummary& s1) {
    const Grid& grid = params.grid();
    if (cfg.initial_type == "constant") {
        return SimState{0.0, Field::constant(grid, cfg.initial1), Field::constant(grid, cfg.initial2)};
    }
    const std::optional<Field> resident = steady_monomorphic_separable(params.species1, s1);
    if (!resident) {
        throw InvalidArgument("initial.type=resident_plus_mutant needs H1 > 0 (type 1 has no positive steady state)");
    }
    return SimState{0.0, *resident, gaussian_bump(grid, cfg.mutant_center, cfg.mutant_width, cfg.mutant_mass)};
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid grid = build_grid(cfg);
    const DimorphicParams params = build_dimorphic(cfg, grid);
    const SpectralSummary s1 = principal_eigenpair(params.species1, grid);
    const SpectralSummary s2 = principal_eigenpair(params.species2, grid);

    ScenarioResult res;
    res.H1 = s1.H;
    res.H2 = s2.H;
    res.lambda2_1 = s1.lambda2;
    res.lambda2_2 = s2.lambda2;
    res.mu = interaction_matrix(params, s1, s2);
    if (cfg.classify_enabled) {
        res.regime = classify(s1.H, s2.H, *res.mu);
        if (res.regime->regime != Regime::DegenerateMu) res.prediction = predicted_masses(*res.regime, *res.mu);
    }

    RunResult run = run_to_stationarity(build_initial_state(cfg, params, s1), params, cfg.step);
    res.final_mass1 = integrate(run.state.g1);
    res.final_mass2 = integrate(*run.state.g2);
    res.stop_reason = run.reason;
    res.t_final = run.state.t;
    res.steps = run.steps;
    res.final_state = std::move(run.state);
    res.masses = std::move(run.masses);

    if (res.prediction) {
        std::string why;
        res.agreement = cross_validate(res, cfg.validate_tol, &why);
        res.discrepancy = why;
    } else if (!cfg.classify_enabled) {
        res.discrepancy = "classifier disabled; no prediction to compare against";
    } else {
        res.discrepancy = "interaction matrix is degenerate; no prediction to compare against";
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

ScenarioConfig figure1_config(double a_bar2, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    const ScenarioConfig defaults;
    cfg.species1 = defaults.species1;
    cfg.species2 = defaults.species2;
    cfg.species2.growth.a_bar = a_bar2;
    cfg.cross_type = "min";
    return cfg;
}

ScenarioResult run_figure1(double a_bar2, const ScenarioConfig& cfg) {
    ScenarioResult r = run_scenario(figure1_config(a_bar2, cfg));
    r.parameter = "species2.growth.a_bar";
    r.value = a_bar2;
    return r;
}

std::vector<ScenarioResult> sweep(const ScenarioConfig& cfg, unsigned threads) {
    if (cfg.sweep_values.empty()) throw ConfigError("sweep.values: no values to sweep");
    if (cfg.sweep_parameter.rfind("sweep.", 0) == 0) throw ConfigError("sweep.parameter: cannot sweep a sweep.* key");
    find_entry(cfg.sweep_parameter);

    std::vector<ScenarioResult> results(cfg.sweep_values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < results.size(); i = next++) {
            const double v = cfg.sweep_values[i];
            ScenarioResult r;
            try {
                ScenarioConfig local = cfg;
                apply_setting(local, cfg.sweep_parameter, format_double(v));
                r = run_scenario(local);
            } catch (const std::exception& e) {
                r = ScenarioResult{};
                r.error = e.what();
                r.discrepancy = "run failed: " + r.error;
            }
            r.parameter = cfg.sweep_parameter;
            r.value = v;
            results[i] = std::move(r);
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, results.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::stable_sort(results.begin(), results.end(),
                     [](const ScenarioResult& a, const ScenarioResult& b) { return a.value < b.value; });
    return results;
}

bool cross_validate(const ScenarioResult& result, double tol, std::string* discrepancy) {
    auto fail = [&](std::string why) {
        if (discrepancy) *discrepancy = std::move(why);
        return false;
    };
    if (!result.ok()) return fail("run failed: " + result.error);
    if (!result.prediction) return fail("no prediction available");
    const PredictedLimit& pred = *result.prediction;

    std::string tried;
    for (const LimitCandidate& c : pred.candidates) {
        if (pred.regime == Regime::Bistable && c.label == "coexistence") continue;
        const double scale = std::max(c.mass1, c.mass2);
        const double floor = std::max(tol * scale, 1e-8);
        auto close = [&](double sim, double want) {
            return want > 0.0 ? std::abs(sim - want) <= tol * want : std::abs(sim) <= floor;
        };
        if (close(result.final_mass1, c.mass1) && close(result.final_mass2, c.mass2)) {
            if (discrepancy) discrepancy->clear();
            return true;
        }
        tried += (tried.empty() ? "" : ", ") + c.label + " (" + format_double(c.mass1) + ", " +
                 format_double(c.mass2) + ")";
    }
    return fail(std::string("regime ") + to_string(pred.regime) + ": simulated masses (" +
                format_double(result.final_mass1) + ", " + format_double(result.final_mass2) +
                ") match none of " + tried + " within relative tolerance " + format_double(tol) +
                "; run stopped: " + to_string(result.stop_reason) + " at t=" + format_double(result.t_final));
}

namespace {

using ojson = nlohmann::ordered_json;

void require_finite(const ojson& j, const std::string& path) {
    if (j.is_number_float()) {
        if (!std::isfinite(j.get<double>())) throw NumericalError("summary JSON: non-finite value at " + path);
    } else if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) require_finite(it.value(), path + "." + it.key());
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) require_finite(j[i], path + "[" + std::to_string(i) + "]");
    }
}

ojson run_json(const ScenarioResult& r, bool include_timing) {
    ojson j;
    j["parameter"] = r.parameter;
    j["value"] = r.value;
    j["ok"] = r.ok();
    j["error"] = r.error;
    j["H1"] = r.H1;
    j["H2"] = r.H2;
    j["lambda2_1"] = r.lambda2_1;
    j["lambda2_2"] = r.lambda2_2;
    if (r.mu) {
        j["mu"] = ojson::array({ojson::array({(*r.mu)(1, 1), (*r.mu)(1, 2)}), ojson::array({(*r.mu)(2, 1), (*r.mu)(2, 2)})});
        j["mu_det"] = r.mu->det;
    } else {
        j["mu"] = nullptr;
        j["mu_det"] = nullptr;
    }
    if (r.regime) {
        j["regime"] = to_string(r.regime->regime);
        j["d21"] = r.regime->d21;
        j["d12"] = r.regime->d12;
        j["tolerance_band"] = r.regime->tolerance_band;
    } else {
        j["regime"] = nullptr;
        j["d21"] = nullptr;
        j["d12"] = nullptr;
        j["tolerance_band"] = nullptr;
    }
    ojson predicted = ojson::array();
    if (r.prediction) {
        for (const auto& c : r.prediction->candidates) {
            predicted.push_back(ojson{{"label", c.label}, {"mass1", c.mass1}, {"mass2", c.mass2}});
        }
    }
    j["predicted"] = predicted;
    j["final_mass1"] = r.final_mass1;
    j["final_mass2"] = r.final_mass2;
    j["stop_reason"] = to_string(r.stop_reason);
    j["t_final"] = r.t_final;
    j["steps"] = r.steps;
    j["agreement"] = r.agreement ? ojson(*r.agreement) : ojson(nullptr);
    j["discrepancy"] = r.discrepancy;
    if (include_timing) j["wall_seconds"] = r.wall_seconds;
    return j;
}

}  // namespace

std::string format_summary_json(const ScenarioConfig& cfg, const std::vector<ScenarioResult>& results,
                                bool include_timing) {
    std::vector<const ScenarioResult*> sorted;
    for (const auto& r : results) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->value < b->value; });

    ojson doc;
    doc["tool"] = "nlvsim";
    doc["version"] = kVersion;
    ojson echo = ojson::object();
    for (const auto& [k, v] : config_echo(cfg)) echo[k] = v;
    doc["config"] = echo;
    ojson runs = ojson::array();
    for (const auto* r : sorted) runs.push_back(run_json(*r, include_timing));
    doc["runs"] = runs;
    require_finite(doc, "$");
    return doc.dump(2) + "\n";
}

void emit_summary_json(const std::filesystem::path& path, const ScenarioConfig& cfg,
                       const std::vector<ScenarioResult>& results, bool include_timing) {
    write_text_file(path, format_summary_json(cfg, results, include_timing));
}

}  // namespace nlv
