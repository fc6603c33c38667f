#include "opsplit/engine.hpp"

#include "opsplit/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace opsplit {

namespace {


std::string describe_h(double h)
{
    std::ostringstream os;
    os.precision(17);
    os << h;
    return os.str();
}

Field to_field(const State& u, GridKind grid, double time)
{
    Field f;
    f.values = u;
    f.grid = grid;
    f.time = time;
    return f;
}

GridKind grid_kind(Boundary b) { return b == Boundary::Periodic ? GridKind::Periodic : GridKind::Dirichlet; }

} // namespace

// ---------------------------------------------------------------------------
// Problem description

ProblemSpec ProblemSpec::example1(double nu, std::size_t n, double final_time)
{
    ProblemSpec p;
    p.boundary = Boundary::Periodic;
    p.nu = nu;
    p.preset = InitialPreset::Example1;
    p.final_time = final_time;
    p.resolution = n;
    return p;
}

ProblemSpec ProblemSpec::example2(double nu, std::size_t d, double final_time)
{
    ProblemSpec p;
    p.boundary = Boundary::Dirichlet;
    p.nu = nu;
    p.preset = InitialPreset::Example2;
    p.final_time = final_time;
    p.resolution = d;
    return p;
}

ProblemSpec ProblemSpec::example3(double nu, std::size_t d, double final_time)
{
    ProblemSpec p = example2(nu, d, final_time);
    p.preset = InitialPreset::Example3;
    return p;
}

void ProblemSpec::validate() const
{
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    if (!(final_time > 0.0)) throw ConfigError("final_time must be positive");
    if (boundary == Boundary::Periodic) {
        if (preset == InitialPreset::Example2 || preset == InitialPreset::Example3) {
            throw ConfigError("examples 2 and 3 are Dirichlet problems");
        }
        PeriodicGrid check(resolution);
    } else {
        if (preset == InitialPreset::Example1) throw ConfigError("example 1 is a periodic problem");
        DirichletGrid check(resolution);
    }
    if (preset == InitialPreset::Custom && samples.size() != resolution) {
        throw DimensionError("custom initial data has " + std::to_string(samples.size()) +
                             " samples, resolution is " + std::to_string(resolution));
    }
    if (reference && reference->size() != resolution) {
        throw DimensionError("reference has " + std::to_string(reference->size()) + " samples, resolution is " +
                             std::to_string(resolution));
    }
}

std::vector<double> ProblemSpec::nodes() const
{
    if (boundary == Boundary::Periodic) return PeriodicGrid(resolution).nodes();
    return DirichletGrid(resolution).nodes();
}

std::vector<double> ProblemSpec::initial_values() const
{
    if (preset == InitialPreset::Custom) return samples;
    std::vector<double> x = nodes();
    for (auto& v : x) {
        switch (preset) {
        case InitialPreset::Example1: v = 0.5 + 0.25 * std::sin(v); break;
        case InitialPreset::Example2: v = hopf_cole_initial(HopfColeExample::Example2, v); break;
        case InitialPreset::Example3: v = hopf_cole_initial(HopfColeExample::Example3, v); break;
        case InitialPreset::Custom: break;
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Methods

Method Method::from_name(std::string_view name)
{
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (key == "ext4" || key == "ext6") {
        Method m;
        m.extrapolation = builtin_extrapolation(key);
        m.name = m.extrapolation->name;
        m.scheme = builtin_scheme("Strang");
        return m;
    }
    Method m;
    try {
        m.scheme = builtin_scheme(key);
    } catch (const NotFoundError&) {
        std::string all;
        for (const auto& n : builtin_scheme_names()) all += n + ", ";
        for (const auto& n : builtin_extrapolation_names()) all += n + (n == "EXT6" ? "" : ", ");
        throw NotFoundError("unknown method '" + std::string(name) + "'; available: " + all);
    }
    m.name = m.scheme.name;
    return m;
}

std::size_t Method::a_evaluations_per_step() const
{
    if (extrapolation) return extrapolation->a_evaluations(scheme.a_stages());
    return scheme.a_stages();
}

// ---------------------------------------------------------------------------
// Flows

State FlowPair::project_real(const State& u)
{
    State out(u.size());
    std::transform(u.begin(), u.end(), out.begin(), [](const complex& z) { return complex{z.real(), 0.0}; });
    return out;
}

SpectralFlows::SpectralFlows(PeriodicGrid grid, double nu, int substeps, SpectralOptions options)
    : grid_(std::move(grid)), nu_(nu), substeps_(substeps), options_(options)
{
    if (substeps < 1) throw ConfigError("substeps must be at least 1");
}

State SpectralFlows::a_flow(const State& u, complex tau)
{
    const SpectralField s = forward_dft(grid_, to_field(u, GridKind::Periodic, 0.0));
    return inverse_dft(grid_, conservation_flow_spectral(grid_, s, tau, substeps_, &work_, options_)).values;
}

State SpectralFlows::b_flow(const State& u, complex tau)
{
    const SpectralField s = forward_dft(grid_, to_field(u, GridKind::Periodic, 0.0));
    return inverse_dft(grid_, diffusion_flow_spectral(s, nu_, tau)).values;
}

FiniteDifferenceFlows::FiniteDifferenceFlows(std::shared_ptr<ExpCache> cache, double nu, int substeps,
                                             GhostPolicy ghosts)
    : cache_(std::move(cache)), nu_(nu), substeps_(substeps), ghosts_(ghosts)
{
    if (!cache_) throw ConfigError("finite-difference flows need a diffusion cache");
    if (substeps < 1) throw ConfigError("substeps must be at least 1");
}

State FiniteDifferenceFlows::a_flow(const State& u, complex tau)
{
    if (tau.imag() != 0.0) throw StabilityGuardError("WENO conservation flow takes real time steps only");
    return weno_conservation_flow(to_field(u, GridKind::Dirichlet, 0.0), tau.real(), substeps_, &work_, ghosts_)
        .values;
}

State FiniteDifferenceFlows::b_flow(const State& u, complex tau)
{
    if (tau.imag() != 0.0) throw StabilityGuardError("finite-difference diffusion flow takes real time steps only");
    return fd_diffusion_flow(to_field(u, GridKind::Dirichlet, 0.0), nu_, tau.real(), *cache_).values;
}

State HookedFlows::a_flow(const State& u, complex tau)
{
    if (disable_a_) {
        ++work_.a_evaluations;
        return u;
    }
    const auto before = inner_.work().a_evaluations;
    State out = inner_.a_flow(u, tau);
    work_.a_evaluations += inner_.work().a_evaluations - before;
    return out;
}

State HookedFlows::b_flow(const State& u, complex tau)
{
    return disable_b_ ? u : inner_.b_flow(u, tau);
}

// ---------------------------------------------------------------------------
// Compositions

std::vector<FlowStage> composition(const SplittingScheme& scheme)
{
    const bool bab = scheme.pattern == Pattern::BAB;
    const std::size_t outer = bab ? scheme.b.size() : scheme.a.size();
    const std::size_t inner = bab ? scheme.a.size() : scheme.b.size();
    if (outer != inner + 1) {
        throw ConfigError("scheme " + scheme.name + " does not have the stage counts of its pattern");
    }
    std::vector<FlowStage> stages;
    stages.reserve(outer + inner);
    for (std::size_t i = 0; i < outer; ++i) {
        if (bab) {
            stages.push_back({SubFlow::B, scheme.b[i]});
            if (i < inner) stages.push_back({SubFlow::A, scheme.a[i]});
        } else {
            stages.push_back({SubFlow::A, scheme.a[i]});
            if (i < inner) stages.push_back({SubFlow::B, scheme.b[i]});
        }
    }
    return stages;
}

std::vector<FlowStage> repeated_composition(const SplittingScheme& scheme, int substeps)
{
    if (substeps < 1) throw ConfigError("substep count must be at least 1");
    const std::vector<FlowStage> one = composition(scheme);
    const double frac = 1.0 / substeps;
    std::vector<FlowStage> out;
    for (int r = 0; r < substeps; ++r) {
        for (const auto& st : one) {
            const complex c = st.coefficient * frac;
            if (!out.empty() && out.back().flow == st.flow) {
                out.back().coefficient += c;
            } else {
                out.push_back({st.flow, c});
            }
        }
    }
    return out;
}

State apply_stages(const State& u, std::span<const FlowStage> stages, double h, FlowPair& flows)
{
    State v = u;
    for (const auto& st : stages) {
        const complex tau = st.coefficient * h;
        v = st.flow == SubFlow::A ? flows.a_flow(v, tau) : flows.b_flow(v, tau);
    }
    return v;
}

namespace {

void guard(const SplittingScheme& scheme, const FlowPair& flows)
{
    if (!scheme.real_coefficients_only() && !flows.accepts_complex_b()) {
        throw StabilityGuardError("scheme " + scheme.name +
                                  " has complex coefficients, which are unstable with the finite-difference and "
                                  "WENO discretization; use Strang, ML62, EXT4 or EXT6");
    }
}

} // namespace

State split_step(const State& u, const SplittingScheme& scheme, double h, FlowPair& flows, bool project_real)
{
    guard(scheme, flows);
    const auto stages = composition(scheme);
    State v = apply_stages(u, stages, h, flows);
    return project_real ? FlowPair::project_real(v) : v;
}

State extrapolated_step(const State& u, const ExtrapolationRule& rule, const SplittingScheme& base, double h,
                        FlowPair& flows, bool project_real)
{
    guard(base, flows);
    State sum(u.size());
    for (const auto& term : rule.terms) {
        const auto stages = repeated_composition(base, term.substeps);
        const State v = apply_stages(u, stages, h, flows);
        const double w = term.weight.value();
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * v[i];
    }
    return project_real ? FlowPair::project_real(sum) : sum;
}

State method_step(const State& u, const Method& method, double h, FlowPair& flows, bool project_real)
{
    if (method.extrapolation) return extrapolated_step(u, *method.extrapolation, method.scheme, h, flows, project_real);
    return split_step(u, method.scheme, h, flows, project_real);
}

void check_backend_compatibility(const Method& method, Boundary boundary)
{
    if (boundary == Boundary::Dirichlet && !method.real_coefficients_only()) {
        throw StabilityGuardError("method " + method.name +
                                  " has complex coefficients, which are unstable with the finite-difference and "
                                  "WENO discretization of Dirichlet problems; use Strang, ML62, EXT4 or EXT6");
    }
}

// ---------------------------------------------------------------------------
// Integration

ProblemContext::ProblemContext(ProblemSpec problem, BackendOptions options)
    : problem_(std::move(problem)), options_(std::move(options))
{
    problem_.validate();
    if (problem_.boundary == Boundary::Periodic) {
        grid_.emplace(problem_.resolution);
    } else {
        cache_ = std::make_shared<ExpCache>(build_diffusion_matrix(DirichletGrid(problem_.resolution), options_.stencil));
    }
}

std::unique_ptr<FlowPair> ProblemContext::make_flows(int substeps) const
{
    if (grid_) return std::make_unique<SpectralFlows>(*grid_, problem_.nu, substeps, options_.spectral);
    return std::make_unique<FiniteDifferenceFlows>(cache_, problem_.nu, substeps, options_.ghosts);
}

const std::vector<double>& ProblemContext::reference() const
{
    std::call_once(reference_once_, [this] {
        if (problem_.reference) {
            reference_ = *problem_.reference;
            return;
        }
        const double t = problem_.final_time;
        if (problem_.boundary == Boundary::Periodic) {
            ReferenceOptions ro;
            ro.spectral = options_.spectral;
            const Field u0 = Field::from_real(problem_.initial_values(), GridKind::Periodic);
            const double dt = std::min(options_.reference_dt, t);
            reference_ = reference_solve_periodic(*grid_, u0, problem_.nu, t, dt, ro).real_part();
            return;
        }
        if (problem_.preset == InitialPreset::Custom) {
            // Without a closed form there is nothing to compare against.
            reference_.assign(problem_.resolution, std::numeric_limits<double>::quiet_NaN());
            return;
        }
        const auto example =
            problem_.preset == InitialPreset::Example2 ? HopfColeExample::Example2 : HopfColeExample::Example3;
        const double t_min = std::min(0.05, t);
        const HopfColeSeries series =
            hopf_cole_coefficients(example, problem_.nu, options_.hopf_cole_terms, options_.quadrature, t_min);
        const auto x = problem_.nodes();
        reference_.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) reference_[i] = evaluate_exact(series, x[i], t);
    });
    return reference_;
}

std::size_t step_count(double final_time, double h)
{
    if (!(h > 0.0)) throw ConfigError("step size h must be positive");
    const double ratio = final_time / h;
    const auto steps = static_cast<std::size_t>(std::llround(ratio));
    if (steps < 1 || std::abs(static_cast<double>(steps) * h - final_time) > 1e-9 * final_time) {
        throw ConfigError("step size h = " + describe_h(h) + " does not divide the final time " +
                          describe_h(final_time));
    }
    return steps;
}

RunResult integrate(const ProblemContext& context, const StepperConfig& config)
{
    const ProblemSpec& problem = context.problem();
    check_backend_compatibility(config.method, problem.boundary);
    const std::size_t steps = step_count(problem.final_time, config.h);
    // The last step lands on T exactly.
    const double h = problem.final_time / static_cast<double>(steps);

    const auto start = std::chrono::steady_clock::now();
    auto flows = context.make_flows(config.substeps);
    const auto init = problem.initial_values();
    State u(init.begin(), init.end());
    for (std::size_t s = 0; s < steps; ++s) {
        u = method_step(u, config.method, h, *flows, config.project_real);
        for (const auto& z : u) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw BlowUpError("method " + config.method.name + " with h = " + describe_h(config.h) +
                                  " produced non-finite values at step " + std::to_string(s + 1));
            }
        }
    }
    const auto stop = std::chrono::steady_clock::now();

    RunResult r;
    r.method = config.method.name;
    r.h = config.h;
    r.steps = steps;
    r.final_state = to_field(u, grid_kind(problem.boundary), problem.final_time);
    r.work = flows->work().a_evaluations;
    r.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    r.error_inf = max_abs_difference(r.final_state.real_part(), context.reference());
    return r;
}

RunResult integrate(const ProblemSpec& problem, const StepperConfig& config, const BackendOptions& options)
{
    check_backend_compatibility(config.method, problem.boundary);
    const ProblemContext context(problem, options);
    return integrate(context, config);
}

ConvergenceReport convergence_study(const ProblemContext& context, const std::vector<Method>& methods,
                                    const std::vector<double>& h_values, const StudyOptions& options)
{
    if (methods.empty() || h_values.empty()) throw ConfigError("convergence study needs methods and step sizes");
    for (const auto& m : methods) check_backend_compatibility(m, context.problem().boundary);
    for (double h : h_values) step_count(context.problem().final_time, h);

    // Shared state is computed up front; cells only read it.
    context.reference();

    struct Cell {
        const Method* method;
        double h;
    };
    std::vector<Cell> cells;
    for (const auto& m : methods) {
        for (double h : h_values) cells.push_back({&m, h});
    }
    std::vector<ReportRow> rows(cells.size());

    auto run_cell = [&](std::size_t i) {
        ReportRow& row = rows[i];
        row.method = cells[i].method->name;
        row.h = cells[i].h;
        try {
            StepperConfig cfg{*cells[i].method, cells[i].h, options.substeps, options.project_real};
            const RunResult r = integrate(context, cfg);
            row.work = r.work;
            row.error_inf = r.error_inf;
            row.runtime_ms = r.wall_ms;
        } catch (const Error& e) {
            row.error_inf = std::numeric_limits<double>::quiet_NaN();
            row.failure = e.what();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(cells.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    ConvergenceReport report;
    report.rows = std::move(rows);
    report.finalize();
    return report;
}

} // namespace opsplit
