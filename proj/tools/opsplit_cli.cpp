#include "opsplit/errors.hpp"
#include "opsplit/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

using namespace opsplit;

namespace {

// Every config key doubles as a --flag; flag values override the file.
void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& values, std::string& config_path)
{
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--config", config_path, "key = value configuration file");
    for (const auto& key : config_keys()) {
        std::string flag = "--" + key;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        auto* opt = cmd->add_option_function<std::string>(
            flag, [&values, key](const std::string& v) { values[key] = v.empty() ? "true" : v; }, "config key " + key);
        if (key == "paper_scale" || key == "project_real" || key == "timing" || key == "dealias") {
            opt->expected(0, 1);
        }
    }
}

ExperimentConfig build_config(const std::map<std::string, std::string>& values, const std::string& config_path)
{
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    for (const auto& [k, v] : values) set_config_value(cfg, k, v);
    return cfg;
}

void print_run(const RunResult& r)
{
    std::printf("method=%s h=%s steps=%zu work_a_evals=%llu error_inf=%s\n", r.method.c_str(),
                format_number(r.h).c_str(), r.steps, static_cast<unsigned long long>(r.work),
                format_number(r.error_inf).c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Operator-splitting integrators for the viscous Burgers equation"};
    app.require_subcommand(1);

    auto* schemes = app.add_subcommand("schemes", "builtin coefficient sets");
    auto* schemes_list = schemes->add_subcommand("list", "print the scheme table");
    schemes->require_subcommand(1);

    std::map<std::string, std::string> run_values, conv_values, exact_values;
    std::string run_config, conv_config, exact_config;
    auto* run = app.add_subcommand("run", "integrate one configuration and print error and work");
    add_config_flags(run, run_values, run_config);
    auto* converge = app.add_subcommand("converge", "convergence study written as CSV");
    add_config_flags(converge, conv_values, conv_config);
    auto* exact = app.add_subcommand("exact", "Hopf-Cole samples as CSV");
    add_config_flags(exact, exact_values, exact_config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (schemes_list->parsed()) {
            std::cout << schemes_table();
            return 0;
        }
        if (run->parsed()) {
            const RunResult r = run_single(build_config(run_values, run_config));
            print_run(r);
            return 0;
        }
        if (converge->parsed()) {
            const ExperimentConfig cfg = build_config(conv_values, conv_config);
            const ConvergenceReport report = run_convergence(cfg);
            if (cfg.output.empty() || cfg.output == "-") {
                emit_report(report, std::cout, cfg.timing);
            } else {
                emit_report(report, cfg.output, cfg.timing);
            }
            int code = 0;
            for (const auto& r : report.rows) {
                if (!r.ok()) {
                    std::cerr << "cell method=" << r.method << " h=" << format_number(r.h) << " failed: " << r.failure
                              << '\n';
                    code = 3;
                }
            }
            return code;
        }
        if (exact->parsed()) {
            const ExperimentConfig cfg = build_config(exact_values, exact_config);
            const auto samples = exact_samples(cfg);
            std::FILE* out = stdout;
            if (!cfg.output.empty() && cfg.output != "-") {
                out = std::fopen(cfg.output.c_str(), "w");
                if (!out) throw IoError("cannot open '" + cfg.output + "' for writing");
            }
            std::fprintf(out, "x,u\n");
            for (const auto& [x, u] : samples) std::fprintf(out, "%s,%s\n", format_number(x).c_str(), format_number(u).c_str());
            if (out != stdout) std::fclose(out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 2;
}
