#pragma once

#include "opsplit/engine.hpp"
#include "opsplit/report.hpp"

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace opsplit {

/// Everything an experiment needs; built from a key = value file and/or
/// command-line flags with the same names.
struct ExperimentConfig {
    std::string preset = "example1";
    std::optional<double> nu;
    std::optional<double> final_time;
    std::optional<std::size_t> resolution;
    std::vector<std::string> methods;
    std::string method;
    std::vector<double> h;
    std::vector<std::size_t> steps;
    int substeps = 5;
    std::string output;
    unsigned workers = 1;
    bool paper_scale = false;
    bool project_real = true;
    std::optional<double> reference_dt;
    std::string stencil = "sixpoint";
    std::string ghosts = "odd";
    bool timing = false;
    bool dealias = false;
    std::size_t points = 0;
};

/// Recognised configuration keys, in file order.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Throws ConfigError naming the key
/// when it is unknown or the value does not parse.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat `key = value` lines; `#` starts a comment.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

ProblemSpec make_problem(const ExperimentConfig& cfg);
BackendOptions make_backend_options(const ExperimentConfig& cfg);

/// Methods of a study; `method` when `methods` is empty. Rejects complex
/// methods on Dirichlet presets.
std::vector<Method> resolve_methods(const ExperimentConfig& cfg, const ProblemSpec& problem);

/// Explicit `h` values, else T/n over `steps`, else the preset default.
std::vector<double> resolve_step_sizes(const ExperimentConfig& cfg, const ProblemSpec& problem);

/// Default step counts: Example 1 n = 40..640, Examples 2 and 3 n = 4..64.
std::vector<std::size_t> default_step_counts(const ProblemSpec& problem);

/// Checks the whole configuration without computing anything.
void validate_config(const ExperimentConfig& cfg);

ConvergenceReport run_convergence(const ExperimentConfig& cfg);
RunResult run_single(const ExperimentConfig& cfg);

/// (x, u(x, T)) of the Hopf-Cole solution for the Dirichlet presets, at the
/// grid nodes or at `points` equispaced points including the ends.
std::vector<std::pair<double, double>> exact_samples(const ExperimentConfig& cfg);

/// Human-readable table of the builtin schemes and extrapolations.
std::string schemes_table();

/// 2 for configuration errors, 3 for numerical failures.
int exit_code_for(const std::exception& e);

} // namespace opsplit
