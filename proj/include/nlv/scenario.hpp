#pragma once

// Config-driven experiments: the two-bump family of growth/kernels, single
// runs, parameter sweeps and the comparison of simulated masses against the
// classifier's prediction.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlv/classifier.hpp"
#include "nlv/core_types.hpp"
#include "nlv/dynamics.hpp"
#include "nlv/spectral.hpp"

namespace nlv {

struct GrowthSpec {
    std::string type = "figure1";  // figure1 | constant | cosine
    double u = 0.3;                // figure1: center
    double a_bar = 1.0;            // figure1: peak
    double value = 0.5;            // constant level, cosine mean
    double amplitude = 0.0;        // cosine: value + amplitude cos(k pi (x - x_lo) / L)
    double k = 1.0;
};

struct KernelSpec {
    std::string type = "window";  // window | constant | bilinear
    double u = 0.3;               // window center
    double half_width = 0.25;
    double inside = 1.0;
    double outside = 0.1;
    double value = 1.0;           // constant kernel
    double c0 = 1.0;              // bilinear: I(x, y) = c0 + c1 x y (general kernel)
    double c1 = 1.0;
};

struct SpeciesSpec {
    double m = 0.01;
    GrowthSpec growth;
    KernelSpec kernel;
};

struct ScenarioConfig {
    double x_lo = 0.0;
    double x_hi = 1.0;
    std::size_t n = 201;

    SpeciesSpec species1;
    SpeciesSpec species2;

    std::string cross_type = "min";  // min (of the two self kernels) | constant
    double cross12 = 0.1;
    double cross21 = 0.1;

    std::string initial_type = "resident_plus_mutant";  // or constant
    double mutant_mass = 1e-2;
    double mutant_center = 0.5;
    double mutant_width = 0.05;
    double initial1 = 0.1;  // constant initial data
    double initial2 = 0.1;

    StepControl step;

    std::filesystem::path output_dir = "out";

    std::string sweep_parameter = "species2.growth.a_bar";
    std::vector<double> sweep_values;

    bool classify_enabled = true;
    double validate_tol = 0.02;

    // Reduced mass ODE (ode subcommand).
    double ode_H1 = 1.0;
    double ode_H2 = 1.0;
    double ode_mu11 = 1.0;
    double ode_mu12 = 0.5;
    double ode_mu21 = 0.5;
    double ode_mu22 = 1.0;
    double ode_rho1 = 0.1;
    double ode_rho2 = 0.1;
    double ode_c1 = 0.0;  // perturbation E_i(t) = c_i exp(-lambda t)
    double ode_c2 = 0.0;
    double ode_lambda = 1.0;
    double ode_t_end = 500.0;

    ScenarioConfig();  // species2 defaults to the u = 0.5 bump
};

struct ConfigKey {
    std::string key;
    std::string description;
};

/// Every accepted configuration key, in documentation order.
const std::vector<ConfigKey>& config_schema();

/// Sets one key. Unknown keys raise ConfigError naming the nearest valid key.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Current value of a key, formatted as it would be written in a config file.
std::string get_setting(const ScenarioConfig& cfg, std::string_view key);

/// All keys with their current values (schema order).
std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioConfig& cfg);

ScenarioConfig config_from_text(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// "a:b:step" (inclusive range) or a comma separated list.
std::vector<double> parse_value_list(std::string_view text);

/// Range checks across keys; throws ConfigError.
void validate_config(const ScenarioConfig& cfg);

Grid build_grid(const ScenarioConfig& cfg);
SpeciesParams build_species(const ScenarioConfig& cfg, int which, const Grid& grid);
DimorphicParams build_dimorphic(const ScenarioConfig& cfg, const Grid& grid);

/// Gaussian bump with exact trapezoid mass `mass`.
Field gaussian_bump(const Grid& grid, double center, double width, double mass);

/// Initial data from the initial.* keys. resident_plus_mutant places species 1
/// at its steady state (needs H1 > 0) and species 2 as a Gaussian bump.
SimState build_initial_state(const ScenarioConfig& cfg, const DimorphicParams& params, const SpectralSummary& s1);

struct ScenarioResult {
    std::string parameter;  // swept key, empty for a single run
    double value = 0.0;

    double H1 = 0.0;
    double H2 = 0.0;
    double lambda2_1 = 0.0;
    double lambda2_2 = 0.0;
    std::optional<InteractionMatrix> mu;
    std::optional<RegimeReport> regime;        // absent when the classifier is disabled
    std::optional<PredictedLimit> prediction;  // masses only

    double final_mass1 = 0.0;
    double final_mass2 = 0.0;
    StopReason stop_reason = StopReason::TimeLimit;
    double t_final = 0.0;
    std::size_t steps = 0;

    std::optional<bool> agreement;  // absent when there is nothing to compare against
    std::string discrepancy;        // set whenever agreement is not true
    double wall_seconds = 0.0;
    std::string error;              // non-empty when the run failed

    std::optional<SimState> final_state;
    std::optional<MassTrajectory> masses;

    bool ok() const noexcept { return error.empty(); }
};

/// Builds the two types from cfg, computes spectra, mu and the regime, runs
/// the dimorphic equation and compares final masses with the prediction
/// (tolerance cfg.validate_tol). Errors propagate.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Two-bump configuration: species 1 centered at 0.3 with peak 1, species 2
/// centered at 0.5 with peak a_bar2, window kernels, cross kernels min{I11, I22},
/// m = 0.01 for both. Grid, initial data and step control come from `base`.
ScenarioConfig figure1_config(double a_bar2, const ScenarioConfig& base = ScenarioConfig());

ScenarioResult run_figure1(double a_bar2, const ScenarioConfig& cfg);

/// One run per sweep value with cfg.sweep_parameter set to it, in parallel.
/// Failed runs are kept with `error` filled in. Sorted by value.
std::vector<ScenarioResult> sweep(const ScenarioConfig& cfg, unsigned threads = 0);

/// True when the simulated masses match one admissible predicted limit
/// within relative tolerance tol (components predicted zero must be below
/// max(tol * largest predicted mass, 1e-8)). Bistable accepts either pure
/// state. Writes the reason for a mismatch into `discrepancy` when given.
bool cross_validate(const ScenarioResult& result, double tol, std::string* discrepancy = nullptr);

/// JSON summary: config echo, per-run numbers and the tool version. Runs are
/// sorted by value. Throws NumericalError if any number is not finite.
std::string format_summary_json(const ScenarioConfig& cfg, const std::vector<ScenarioResult>& results,
                                bool include_timing = true);
void emit_summary_json(const std::filesystem::path& path, const ScenarioConfig& cfg,
                       const std::vector<ScenarioResult>& results, bool include_timing = true);

}  // namespace nlv
