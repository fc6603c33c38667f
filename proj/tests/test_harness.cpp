#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opsplit/errors.hpp"
#include "opsplit/harness.hpp"

#include <numbers>
#include <sstream>

using namespace opsplit;

TEST_CASE("config files")
{
    std::istringstream in("# experiment\npreset = example2\nnu = 0.01   # smaller\nmethods = strang, ml62 ,ext6\n"
                          "steps = 4,8\npaper_scale = true\n\n");
    const ExperimentConfig cfg = parse_config(in);
    CHECK(cfg.preset == "example2");
    CHECK(cfg.nu == 0.01);
    CHECK(cfg.methods == std::vector<std::string>{"strang", "ml62", "ext6"});
    CHECK(cfg.steps == std::vector<std::size_t>{4, 8});
    CHECK(cfg.paper_scale);
    CHECK(make_problem(cfg).resolution == 500);
}

TEST_CASE("every key is accepted")
{
    ExperimentConfig cfg;
    for (const auto& k : config_keys()) {
        CAPTURE(k);
        std::string v = "1";
        if (k == "preset") v = "example1";
        if (k == "methods" || k == "method") v = "strang";
        if (k == "stencil") v = "truncated";
        if (k == "ghosts") v = "zero";
        if (k == "output") v = "out.csv";
        CHECK_NOTHROW(set_config_value(cfg, k, v));
    }
}

TEST_CASE("errors name the key")
{
    ExperimentConfig cfg;
    try {
        std::istringstream in("methodz = strang\n");
        parse_config(in);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("methodz") != std::string::npos);
    }
    try {
        set_config_value(cfg, "nu", "fast");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'nu'") != std::string::npos);
    }
    std::istringstream no_eq("preset example1\n");
    CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent.cfg"), IoError);
}

TEST_CASE("desk-scale and paper-scale presets")
{
    ExperimentConfig cfg;
    ProblemSpec p = make_problem(cfg);
    CHECK(p.resolution == 128);
    CHECK(p.nu == 0.03);
    CHECK(p.final_time == doctest::Approx(2.0 * std::numbers::pi));
    cfg.paper_scale = true;
    CHECK(make_problem(cfg).resolution == 512);
    cfg.preset = "example3";
    cfg.paper_scale = false;
    p = make_problem(cfg);
    CHECK(p.resolution == 200);
    CHECK(p.boundary == Boundary::Dirichlet);
    CHECK(p.final_time == 1.0);
}

TEST_CASE("default step sizes")
{
    ExperimentConfig cfg;
    const auto h = resolve_step_sizes(cfg, make_problem(cfg));
    REQUIRE(h.size() == 5);
    CHECK(h.front() == doctest::Approx(2.0 * std::numbers::pi / 40));
    cfg.preset = "example2";
    CHECK(resolve_step_sizes(cfg, make_problem(cfg)).back() == 1.0 / 64);
    cfg.h = {0.3};
    CHECK_THROWS_AS(resolve_step_sizes(cfg, make_problem(cfg)), ConfigError);
}

TEST_CASE("complex methods on Dirichlet presets fail validation")
{
    ExperimentConfig cfg;
    cfg.preset = "example2";
    cfg.methods = {"strang", "sm64"};
    CHECK_THROWS_AS(validate_config(cfg), StabilityGuardError);
    CHECK_THROWS_AS(run_convergence(cfg), StabilityGuardError);
    cfg.methods = {"strang", "nope"};
    CHECK_THROWS_AS(validate_config(cfg), NotFoundError);
}

TEST_CASE("run and converge agree")
{
    ExperimentConfig cfg;
    cfg.preset = "example2";
    cfg.resolution = 50;
    cfg.methods = {"ext6"};
    cfg.steps = {8, 16};
    const auto rep = run_convergence(cfg);
    ExperimentConfig one = cfg;
    one.methods.clear();
    one.method = "ext6";
    one.steps.clear();
    one.h = {0.125};
    const RunResult r = run_single(one);
    CHECK(r.error_inf == rep.rows.front().error_inf);
    CHECK(r.work == rep.rows.front().work);
}

TEST_CASE("exact samples")
{
    ExperimentConfig cfg;
    CHECK_THROWS_AS(exact_samples(cfg), ConfigError);
    cfg.preset = "example2";
    cfg.points = 5;
    const auto s = exact_samples(cfg);
    REQUIRE(s.size() == 5);
    CHECK(s.front().second == 0.0);
    CHECK(s[2].first == 0.5);
    CHECK(s[2].second > 0.0);
}

TEST_CASE("exit codes")
{
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(StabilityGuardError("x")) == 2);
    CHECK(exit_code_for(BlowUpError("x")) == 3);
    CHECK(exit_code_for(PrecisionError("x")) == 3);
}

TEST_CASE("scheme table")
{
    const std::string t = schemes_table();
    CHECK(t.find("(6,2)") != std::string::npos);
    CHECK(t.find("(6,4)") != std::string::npos);
    CHECK(t.find("EXT6") != std::string::npos);
}
