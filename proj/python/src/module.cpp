#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "opsplit/errors.hpp"
#include "opsplit/harness.hpp"

#include <algorithm>
#include <sstream>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace opsplit;

namespace {

// Keyword arguments are routed through the config parser so that Python,
// the CLI and config files accept the same keys and values.
ExperimentConfig config_from(const py::kwargs& kw)
{
    ExperimentConfig cfg;
    for (const auto& [k, v] : kw) {
        const std::string key = py::str(k);
        std::string value;
        if (py::isinstance<py::bool_>(v)) {
            value = v.cast<bool>() ? "true" : "false";
        } else if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
            for (const auto& item : v) {
                if (!value.empty()) value += ",";
                value += py::isinstance<py::float_>(item) ? format_number(item.cast<double>()) : std::string(py::str(item));
            }
        } else if (py::isinstance<py::float_>(v)) {
            value = format_number(v.cast<double>());
        } else {
            value = py::str(v);
        }
        set_config_value(cfg, key, value);
    }
    return cfg;
}

py::array_t<double> to_numpy(const std::vector<double>& v)
{
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::dict scheme_dict(const SplittingScheme& s)
{
    py::dict d;
    d["name"] = s.name;
    d["pattern"] = std::string(to_string(s.pattern));
    d["a"] = s.a;
    d["b"] = s.b;
    d["nominal_order"] = s.nominal_order;
    d["effective_order"] = s.effective_order ? py::cast(*s.effective_order) : py::none();
    d["real"] = s.real_coefficients_only();
    return d;
}

py::dict report_dict(const ConvergenceReport& r)
{
    py::list rows;
    for (const auto& row : r.rows) {
        rows.append(py::dict("method"_a = row.method, "h"_a = row.h, "work"_a = row.work, "error_inf"_a = row.error_inf,
                             "runtime_ms"_a = row.runtime_ms, "failure"_a = row.failure));
    }
    py::dict slopes;
    for (const auto& [m, s] : r.slopes) slopes[py::str(m)] = s;
    return py::dict("rows"_a = rows, "slopes"_a = slopes);
}

} // namespace

PYBIND11_MODULE(_opsplit, m)
{
    m.doc() = "Operator-splitting integrators for the viscous Burgers equation";

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<StabilityGuardError> guard_error(m, "StabilityGuardError", config_error.ptr());
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const StabilityGuardError& e) {
            py::set_error(guard_error, e.what());
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical_error, e.what());
        }
    });

    m.def("scheme_names", [] {
        auto names = builtin_scheme_names();
        for (const auto& n : builtin_extrapolation_names()) names.push_back(n);
        return names;
    });
    m.def("scheme", [](const std::string& name) { return scheme_dict(builtin_scheme(name)); }, "name"_a);
    m.def("validate_scheme", [](const std::string& name) {
        ValidationReport r;
        try {
            r = validate(builtin_extrapolation(name));
        } catch (const NotFoundError&) {
            r = validate(builtin_scheme(name));
        }
        py::list out;
        for (const auto& v : r.violations) out.append(py::make_tuple(v.invariant, v.residual));
        return out;
    }, "name"_a, "list of (invariant, residual) violations; empty when consistent");
    m.def("schemes_table", &schemes_table);

    m.def("run", [](const py::kwargs& kw) {
        const RunResult r = run_single(config_from(kw));
        const auto u = r.final_state.real_part();
        return py::dict("method"_a = r.method, "h"_a = r.h, "steps"_a = r.steps, "work"_a = r.work,
                        "error_inf"_a = r.error_inf, "u"_a = to_numpy(u));
    }, "Integrate one configuration. Keys as in config files (preset, nu, method, h, ...).");

    m.def("converge", [](const py::kwargs& kw) {
        const ExperimentConfig cfg = config_from(kw);
        ConvergenceReport r;
        {
            py::gil_scoped_release nogil;
            r = run_convergence(cfg);
        }
        return report_dict(r);
    }, "Convergence study; returns rows and fitted slopes.");

    m.def("converge_csv", [](const py::kwargs& kw) {
        const ExperimentConfig cfg = config_from(kw);
        ConvergenceReport r;
        {
            py::gil_scoped_release nogil;
            r = run_convergence(cfg);
        }
        std::ostringstream os;
        emit_report(r, os, cfg.timing);
        return os.str();
    });

    m.def("exact", [](const std::string& preset, double nu, double t, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
        if (preset != "example2" && preset != "example3") {
            throw ConfigError("exact solutions exist for example2 and example3 only");
        }
        const auto example = preset == "example3" ? HopfColeExample::Example3 : HopfColeExample::Example2;
        const HopfColeSeries s = hopf_cole_coefficients(example, nu, 100, {}, std::min(0.05, t));
        const double* in = x.data();
        std::vector<double> out(static_cast<std::size_t>(x.size()));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluate_exact(s, in[i], t);
        return to_numpy(out);
    }, "preset"_a, "nu"_a, "t"_a, "x"_a);

    m.def("weno5", [](double fm2, double fm1, double f0, double fp1, double fp2) {
        const auto r = weno5_reconstruct(fm2, fm1, f0, fp1, fp2);
        return py::make_tuple(r.value, r.weights);
    });
}
