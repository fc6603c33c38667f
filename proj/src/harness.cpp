#include "opsplit/harness.hpp"

#include "opsplit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace opsplit {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected)
{
    throw ConfigError("config key '" + key + "': cannot use '" + value + "', expected " + expected);
}

double to_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    bad_value(key, value, "a number");
}

std::size_t to_count(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used == value.size() && v >= 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    bad_value(key, value, "a non-negative integer");
}

bool to_bool(const std::string& key, const std::string& value)
{
    const std::string v = lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, value, "true or false");
}

bool is_dirichlet_preset(const std::string& preset) { return preset == "example2" || preset == "example3"; }

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys{
        "preset",       "nu",      "final_time", "resolution", "methods",      "method", "h",
        "steps",        "substeps", "output",    "workers",    "paper_scale",  "project_real",
        "reference_dt", "stencil", "ghosts",     "timing",     "dealias",      "points"};
    return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "preset") {
        const std::string p = lower(value);
        if (p != "example1" && p != "example2" && p != "example3") bad_value(key, value, "example1, example2 or example3");
        cfg.preset = p;
    } else if (key == "nu") {
        cfg.nu = to_double(key, value);
    } else if (key == "final_time") {
        cfg.final_time = to_double(key, value);
    } else if (key == "resolution") {
        cfg.resolution = to_count(key, value);
    } else if (key == "methods") {
        cfg.methods = split_list(value);
    } else if (key == "method") {
        cfg.method = value;
    } else if (key == "h") {
        cfg.h.clear();
        for (const auto& v : split_list(value)) cfg.h.push_back(to_double(key, v));
    } else if (key == "steps") {
        cfg.steps.clear();
        for (const auto& v : split_list(value)) cfg.steps.push_back(to_count(key, v));
    } else if (key == "substeps") {
        cfg.substeps = static_cast<int>(to_count(key, value));
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "workers") {
        cfg.workers = static_cast<unsigned>(to_count(key, value));
    } else if (key == "paper_scale") {
        cfg.paper_scale = to_bool(key, value);
    } else if (key == "project_real") {
        cfg.project_real = to_bool(key, value);
    } else if (key == "reference_dt") {
        cfg.reference_dt = to_double(key, value);
    } else if (key == "stencil") {
        const std::string s = lower(value);
        if (s != "sixpoint" && s != "printed" && s != "truncated") bad_value(key, value, "sixpoint, printed or truncated");
        cfg.stencil = s;
    } else if (key == "ghosts") {
        const std::string s = lower(value);
        if (s != "odd" && s != "zero") bad_value(key, value, "odd or zero");
        cfg.ghosts = s;
    } else if (key == "timing") {
        cfg.timing = to_bool(key, value);
    } else if (key == "dealias") {
        cfg.dealias = to_bool(key, value);
    } else if (key == "points") {
        cfg.points = to_count(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    return parse_config(in, std::move(base));
}

ProblemSpec make_problem(const ExperimentConfig& cfg)
{
    ProblemSpec p;
    if (cfg.preset == "example1") {
        p = ProblemSpec::example1(cfg.nu.value_or(0.03), cfg.paper_scale ? 512 : 128);
    } else if (cfg.preset == "example2") {
        p = ProblemSpec::example2(cfg.nu.value_or(0.1), cfg.paper_scale ? 500 : 200);
    } else if (cfg.preset == "example3") {
        p = ProblemSpec::example3(cfg.nu.value_or(0.1), cfg.paper_scale ? 500 : 200);
    } else {
        throw ConfigError("config key 'preset': unknown preset '" + cfg.preset + "'");
    }
    if (cfg.final_time) p.final_time = *cfg.final_time;
    if (cfg.resolution) p.resolution = *cfg.resolution;
    try {
        p.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid problem (keys nu, final_time, resolution): ") + e.what());
    }
    return p;
}

BackendOptions make_backend_options(const ExperimentConfig& cfg)
{
    BackendOptions o;
    o.spectral.dealias = cfg.dealias;
    if (cfg.stencil == "printed") o.stencil = BoundaryStencil::Printed;
    else if (cfg.stencil == "truncated") o.stencil = BoundaryStencil::Truncated;
    o.ghosts = cfg.ghosts == "zero" ? GhostPolicy::Zero : GhostPolicy::OddReflection;
    if (cfg.reference_dt) {
        if (!(*cfg.reference_dt > 0.0)) throw ConfigError("config key 'reference_dt' must be positive");
        o.reference_dt = *cfg.reference_dt;
    }
    return o;
}

std::vector<Method> resolve_methods(const ExperimentConfig& cfg, const ProblemSpec& problem)
{
    std::vector<std::string> names = cfg.methods;
    if (names.empty() && !cfg.method.empty()) names.push_back(cfg.method);
    if (names.empty()) throw ConfigError("config key 'methods': no method given");
    std::vector<Method> out;
    for (const auto& n : names) {
        Method m;
        try {
            m = Method::from_name(n);
        } catch (const NotFoundError& e) {
            throw NotFoundError(std::string("config key 'methods': ") + e.what());
        }
        check_backend_compatibility(m, problem.boundary);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<std::size_t> default_step_counts(const ProblemSpec& problem)
{
    if (problem.boundary == Boundary::Periodic) return {40, 80, 160, 320, 640};
    return {4, 8, 16, 32, 64};
}

std::vector<double> resolve_step_sizes(const ExperimentConfig& cfg, const ProblemSpec& problem)
{
    std::vector<double> h = cfg.h;
    if (h.empty()) {
        const auto counts = cfg.steps.empty() ? default_step_counts(problem) : cfg.steps;
        for (std::size_t n : counts) {
            if (n == 0) throw ConfigError("config key 'steps': step counts must be positive");
            h.push_back(problem.final_time / static_cast<double>(n));
        }
    }
    for (double v : h) {
        try {
            step_count(problem.final_time, v);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("config key 'h': ") + e.what());
        }
    }
    return h;
}

void validate_config(const ExperimentConfig& cfg)
{
    if (cfg.substeps < 1) throw ConfigError("config key 'substeps' must be at least 1");
    if (cfg.workers < 1) throw ConfigError("config key 'workers' must be at least 1");
    const ProblemSpec p = make_problem(cfg);
    make_backend_options(cfg);
    resolve_methods(cfg, p);
    resolve_step_sizes(cfg, p);
}

ConvergenceReport run_convergence(const ExperimentConfig& cfg)
{
    validate_config(cfg);
    const ProblemSpec p = make_problem(cfg);
    const auto methods = resolve_methods(cfg, p);
    const auto h = resolve_step_sizes(cfg, p);
    const ProblemContext context(p, make_backend_options(cfg));
    StudyOptions so;
    so.substeps = cfg.substeps;
    so.project_real = cfg.project_real;
    so.workers = cfg.workers;
    return convergence_study(context, methods, h, so);
}

RunResult run_single(const ExperimentConfig& cfg)
{
    validate_config(cfg);
    const ProblemSpec p = make_problem(cfg);
    const auto methods = resolve_methods(cfg, p);
    if (methods.size() != 1) throw ConfigError("config key 'method': run takes exactly one method");
    const auto h = resolve_step_sizes(cfg, p);
    if (h.size() != 1) throw ConfigError("config key 'h': run takes exactly one step size");
    const ProblemContext context(p, make_backend_options(cfg));
    return integrate(context, StepperConfig{methods.front(), h.front(), cfg.substeps, cfg.project_real});
}

std::vector<std::pair<double, double>> exact_samples(const ExperimentConfig& cfg)
{
    if (!is_dirichlet_preset(cfg.preset)) {
        throw ConfigError("config key 'preset': exact solutions exist for example2 and example3 only");
    }
    const ProblemSpec p = make_problem(cfg);
    const BackendOptions o = make_backend_options(cfg);
    const auto example = p.preset == InitialPreset::Example2 ? HopfColeExample::Example2 : HopfColeExample::Example3;
    const double t_min = std::min(0.05, p.final_time);
    const HopfColeSeries series = hopf_cole_coefficients(example, p.nu, o.hopf_cole_terms, o.quadrature, t_min);

    std::vector<double> x;
    if (cfg.points == 1) throw ConfigError("config key 'points' must be 0 (grid nodes) or at least 2");
    if (cfg.points >= 2) {
        for (std::size_t i = 0; i < cfg.points; ++i) x.push_back(static_cast<double>(i) / static_cast<double>(cfg.points - 1));
    } else {
        x = p.nodes();
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(x.size());
    for (double xi : x) out.emplace_back(xi, evaluate_exact(series, xi, p.final_time));
    return out;
}

std::string schemes_table()
{
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %-8s %-7s %-6s %-10s %s\n", "name", "pattern", "stages", "order", "effective",
                  "coefficients");
    os << buf;
    for (const auto& n : builtin_scheme_names()) {
        const SplittingScheme s = builtin_scheme(n);
        std::string eff = "-";
        if (s.effective_order) {
            eff = "(" + std::to_string(s.effective_order->first) + "," + std::to_string(s.effective_order->second) + ")";
        }
        std::snprintf(buf, sizeof buf, "%-8s %-8s %-7zu %-6d %-10s %s\n", s.name.c_str(),
                      std::string(to_string(s.pattern)).c_str(), s.a_stages(), s.nominal_order, eff.c_str(),
                      s.real_coefficients_only() ? "real" : "complex");
        os << buf;
    }
    for (const auto& n : builtin_extrapolation_names()) {
        const ExtrapolationRule r = builtin_extrapolation(n);
        std::string terms;
        for (const auto& t : r.terms) {
            if (!terms.empty()) terms += " ";
            terms += std::to_string(t.weight.num) + "/" + std::to_string(t.weight.den) + "@" + std::to_string(t.substeps);
        }
        std::snprintf(buf, sizeof buf, "%-8s %-8s %-7zu %-6d %-10s real, Strang base: %s\n", r.name.c_str(), "extrap",
                      r.a_evaluations(1), r.target_order(), "-", terms.c_str());
        os << buf;
    }
    return os.str();
}

int exit_code_for(const std::exception& e)
{
    if (const auto* err = dynamic_cast<const Error*>(&e)) return err->is_numerical() ? 3 : 2;
    return 3;
}

} // namespace opsplit
