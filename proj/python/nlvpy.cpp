#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlv/classifier.hpp"
#include "nlv/dynamics.hpp"
#include "nlv/error.hpp"
#include "nlv/io.hpp"
#include "nlv/scenario.hpp"
#include "nlv/spectral.hpp"
#include "nlv/steady_states.hpp"
#include "nlv/version.hpp"

namespace py = pybind11;
using namespace nlv;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const Field& f) { return to_array(f.values()); }

Field to_field(const Grid& grid, const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
               const char* what) {
    if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != grid.n()) {
        throw InvalidArgument(std::string(what) + ": expected a 1-d array with one value per grid node");
    }
    return Field(grid, std::vector<double>(a.data(), a.data() + a.shape(0)));
}

py::dict spectrum_dict(const SpectralSummary& s) {
    py::dict d;
    d["H"] = s.H;
    d["lambda2"] = s.lambda2;
    d["A1"] = to_array(s.A1);
    d["second_mode"] = to_array(s.second_mode);
    d["residual"] = s.residual;
    d["iterations"] = s.iterations;
    return d;
}

py::dict report_dict(const RegimeReport& r) {
    py::dict d;
    d["regime"] = to_string(r.regime);
    d["d21"] = r.d21;
    d["d12"] = r.d12;
    d["tolerance_band"] = r.tolerance_band;
    return d;
}

Field steady_for(const SpeciesParams& p, const Grid& grid) {
    if (p.kernel.is_separable()) {
        const auto g = steady_monomorphic_separable(p, principal_eigenpair(p, grid));
        if (!g) throw InvalidArgument("steady state: principal eigenvalue H <= 0, only the trivial state exists");
        return *g;
    }
    return steady_fixed_point(p, grid).g;
}

}  // namespace

PYBIND11_MODULE(nlvpy, m) {
    m.doc() = "Nonlocal competitive Lotka-Volterra populations: spectra, steady states, dynamics, regimes.";
    m.attr("__version__") = kVersion;

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<InvalidArgument> invalid_argument(m, "InvalidArgument", PyExc_ValueError);
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const InvalidArgument& e) {
            py::set_error(invalid_argument, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical_error, e.what());
        }
    });

    py::class_<ScenarioConfig>(m, "Config")
        .def(py::init<>())
        .def_static("load", &load_config, py::arg("path"))
        .def_static("from_text", [](const std::string& text) { return config_from_text(text); }, py::arg("text"))
        .def("set", [](ScenarioConfig& c, const std::string& k, const std::string& v) { apply_setting(c, k, v); },
             py::arg("key"), py::arg("value"))
        .def("get", [](const ScenarioConfig& c, const std::string& k) { return get_setting(c, k); }, py::arg("key"))
        .def("echo", [](const ScenarioConfig& c) {
            py::dict d;
            for (const auto& [k, v] : config_echo(c)) d[py::str(k)] = v;
            return d;
        })
        .def("validate", [](const ScenarioConfig& c) { validate_config(c); })
        .def("nodes", [](const ScenarioConfig& c) { return to_array(build_grid(c).nodes()); })
        .def_static("keys", [] {
            std::vector<std::string> keys;
            for (const auto& k : config_schema()) keys.emplace_back(k.key);
            return keys;
        });

    m.def("figure1_config", [](double a_bar2, const std::optional<ScenarioConfig>& base) {
        return figure1_config(a_bar2, base.value_or(ScenarioConfig()));
    }, py::arg("a_bar2"), py::arg("base") = py::none());

    m.def("eigenpair", [](const ScenarioConfig& cfg, int species) {
        const Grid grid = build_grid(cfg);
        return spectrum_dict(principal_eigenpair(build_species(cfg, species, grid), grid));
    }, py::arg("config"), py::arg("species") = 1, "Principal and second eigenpairs of m d2/dx2 + a for one type.");

    m.def("eigenpair_arrays", [](double x_lo, double x_hi, double mobility,
                                 const py::array_t<double, py::array::c_style | py::array::forcecast>& growth) {
        const Grid grid(x_lo, x_hi, static_cast<std::size_t>(growth.size()));
        const SpeciesParams p(mobility, to_field(grid, growth, "growth"),
                              CompetitionKernel::separable(Field::constant(grid, 1.0)));
        return spectrum_dict(principal_eigenpair(p, grid));
    }, py::arg("x_lo"), py::arg("x_hi"), py::arg("m"), py::arg("growth"));

    m.def("steady_state", [](const ScenarioConfig& cfg, int species) {
        const Grid grid = build_grid(cfg);
        return to_array(steady_for(build_species(cfg, species, grid), grid));
    }, py::arg("config"), py::arg("species") = 1, "Positive monomorphic steady state of one type.");

    m.def("classify", [](double H1, double H2, const std::array<std::array<double, 2>, 2>& mu, double eps) {
        return report_dict(
            classify(H1, H2, InteractionMatrix::from_entries(mu[0][0], mu[0][1], mu[1][0], mu[1][1]), eps));
    }, py::arg("H1"), py::arg("H2"), py::arg("mu"), py::arg("eps") = -1.0);

    m.def("mass_ode", [](double H1, double H2, const std::array<std::array<double, 2>, 2>& mu,
                         std::array<double, 2> rho0, double t_end, double record_every) {
        const auto traj = integrate_mass_ode(H1, H2, InteractionMatrix::from_entries(mu[0][0], mu[0][1], mu[1][0], mu[1][1]),
                                             rho0, nullptr, t_end, record_every);
        py::dict d;
        d["t"] = to_array(traj.times);
        d["rho1"] = to_array(traj.rho1);
        d["rho2"] = to_array(*traj.rho2);
        return d;
    }, py::arg("H1"), py::arg("H2"), py::arg("mu"), py::arg("rho0"), py::arg("t_end"), py::arg("record_every") = 1.0);

    py::class_<ScenarioResult>(m, "Result")
        .def_readonly("parameter", &ScenarioResult::parameter)
        .def_readonly("value", &ScenarioResult::value)
        .def_readonly("H1", &ScenarioResult::H1)
        .def_readonly("H2", &ScenarioResult::H2)
        .def_readonly("final_mass1", &ScenarioResult::final_mass1)
        .def_readonly("final_mass2", &ScenarioResult::final_mass2)
        .def_readonly("t_final", &ScenarioResult::t_final)
        .def_readonly("steps", &ScenarioResult::steps)
        .def_readonly("agreement", &ScenarioResult::agreement)
        .def_readonly("discrepancy", &ScenarioResult::discrepancy)
        .def_readonly("error", &ScenarioResult::error)
        .def_property_readonly("ok", &ScenarioResult::ok)
        .def_property_readonly("stop_reason", [](const ScenarioResult& r) { return to_string(r.stop_reason); })
        .def_property_readonly("regime", [](const ScenarioResult& r) -> std::optional<std::string> {
            if (!r.regime) return std::nullopt;
            return to_string(r.regime->regime);
        })
        .def_property_readonly("mu", [](const ScenarioResult& r) -> std::optional<std::array<std::array<double, 2>, 2>> {
            if (!r.mu) return std::nullopt;
            const auto& mu = *r.mu;
            return std::array<std::array<double, 2>, 2>{{{mu(1, 1), mu(1, 2)}, {mu(2, 1), mu(2, 2)}}};
        })
        .def_property_readonly("g1", [](const ScenarioResult& r) -> py::object {
            if (!r.final_state) return py::none();
            return to_array(r.final_state->g1);
        })
        .def_property_readonly("g2", [](const ScenarioResult& r) -> py::object {
            if (!r.final_state || !r.final_state->g2) return py::none();
            return to_array(*r.final_state->g2);
        })
        .def("__repr__", [](const ScenarioResult& r) {
            return "<Result " + (r.regime ? std::string(to_string(r.regime->regime)) : std::string("unclassified")) +
                   " masses=(" + format_double(r.final_mass1) + ", " + format_double(r.final_mass2) + ")>";
        });

    m.def("simulate", &run_scenario, py::arg("config"), py::call_guard<py::gil_scoped_release>(),
          "Spectra, regime and a dimorphic run to stationarity, compared against the prediction.");
    m.def("sweep", &sweep, py::arg("config"), py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("summary_json", &format_summary_json, py::arg("config"), py::arg("results"),
          py::arg("include_timing") = true);

    m.def("field_csv", [](double x_lo, double x_hi,
                          const py::array_t<double, py::array::c_style | py::array::forcecast>& g1,
                          const std::optional<py::array_t<double, py::array::c_style | py::array::forcecast>>& g2) {
        const Grid grid(x_lo, x_hi, static_cast<std::size_t>(g1.size()));
        const Field f1 = to_field(grid, g1, "g1");
        if (!g2) return format_field_csv(f1);
        const Field f2 = to_field(grid, *g2, "g2");
        return format_field_csv(f1, &f2);
    }, py::arg("x_lo"), py::arg("x_hi"), py::arg("g1"), py::arg("g2") = py::none());

    m.def("parse_field_csv", [](const std::string& text) {
        const FieldTable t = parse_field_csv(text);
        py::dict d;
        d["x"] = to_array(t.x);
        d["g1"] = to_array(t.g1);
        d["g2"] = t.g2 ? py::object(to_array(*t.g2)) : py::none();
        return d;
    }, py::arg("text"));
}
