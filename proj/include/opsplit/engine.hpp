#pragma once

#include "opsplit/exact.hpp"
#include "opsplit/fd.hpp"
#include "opsplit/field.hpp"
#include "opsplit/report.hpp"
#include "opsplit/schemes.hpp"
#include "opsplit/spectral.hpp"

#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opsplit {

enum class Boundary { Periodic, Dirichlet };

enum class InitialPreset {
    /// u0 = 1/2 + sin(x)/4 on [0, 2π], periodic.
    Example1,
    /// u0 = sin(πx)/5 on [0, 1], homogeneous Dirichlet.
    Example2,
    /// u0 = x(1-x)/2 on [0, 1], homogeneous Dirichlet.
    Example3,
    /// User-supplied samples.
    Custom,
};

/// The initial-boundary value problem u_t + u u_x = ν u_xx.
struct ProblemSpec {
    Boundary boundary = Boundary::Periodic;
    double nu = 0.03;
    InitialPreset preset = InitialPreset::Example1;
    /// Node values for InitialPreset::Custom.
    std::vector<double> samples;
    double final_time = 1.0;
    /// N (periodic) or D (Dirichlet).
    std::size_t resolution = 128;
    /// Reference solution at final_time for custom Dirichlet data; periodic
    /// problems fall back to the integrating-factor solve when absent.
    std::optional<std::vector<double>> reference;

    static ProblemSpec example1(double nu, std::size_t n = 128, double final_time = 2.0 * std::numbers::pi);
    static ProblemSpec example2(double nu, std::size_t d = 200, double final_time = 1.0);
    static ProblemSpec example3(double nu, std::size_t d = 200, double final_time = 1.0);

    /// Throws ConfigError on ν ≤ 0, T ≤ 0 or a resolution the backend rejects.
    void validate() const;
    std::vector<double> nodes() const;
    std::vector<double> initial_values() const;
};

/// A time integrator: a splitting scheme, optionally extrapolated.
struct Method {
    std::string name;
    SplittingScheme scheme;
    std::optional<ExtrapolationRule> extrapolation;

    /// Builtin scheme name, or EXT4 / EXT6 over Strang.
    static Method from_name(std::string_view name);

    bool real_coefficients_only() const { return scheme.real_coefficients_only(); }
    std::size_t a_evaluations_per_step() const;
};

struct StepperConfig {
    Method method;
    double h = 0.1;
    int substeps = 5;
    bool project_real = true;
};

/// Discretization choices that are not part of the time integrator.
struct BackendOptions {
    SpectralOptions spectral{};
    BoundaryStencil stencil = BoundaryStencil::SixPoint;
    GhostPolicy ghosts = GhostPolicy::OddReflection;
    /// Step of the periodic integrating-factor reference.
    double reference_dt = 1e-4;
    std::size_t hopf_cole_terms = 100;
    QuadratureSpec quadrature{};
};

using State = std::vector<complex>;

/// The two sub-flows of the splitting, on nodal values.
///
/// A is the conservation law u_t + (u²/2)_x = 0, B the diffusion
/// u_t = ν u_xx. Each A evaluation increments work().
class FlowPair {
public:
    virtual ~FlowPair() = default;

    virtual State a_flow(const State& u, complex tau) = 0;
    virtual State b_flow(const State& u, complex tau) = 0;
    virtual bool accepts_complex_b() const = 0;

    static State project_real(const State& u);

    WorkCounter& work() { return work_; }
    const WorkCounter& work() const { return work_; }

protected:
    WorkCounter work_;
};

/// Periodic backend: exact Fourier diffusion, pseudospectral RK4 conservation.
class SpectralFlows final : public FlowPair {
public:
    SpectralFlows(PeriodicGrid grid, double nu, int substeps, SpectralOptions options = {});

    State a_flow(const State& u, complex tau) override;
    State b_flow(const State& u, complex tau) override;
    bool accepts_complex_b() const override { return true; }

private:
    PeriodicGrid grid_;
    double nu_;
    int substeps_;
    SpectralOptions options_;
};

/// Dirichlet backend: matrix-exponential diffusion, WENO5 RK4 conservation.
/// Real time steps only.
class FiniteDifferenceFlows final : public FlowPair {
public:
    FiniteDifferenceFlows(std::shared_ptr<ExpCache> cache, double nu, int substeps,
                          GhostPolicy ghosts = GhostPolicy::OddReflection);

    State a_flow(const State& u, complex tau) override;
    State b_flow(const State& u, complex tau) override;
    bool accepts_complex_b() const override { return false; }

private:
    std::shared_ptr<ExpCache> cache_;
    double nu_;
    int substeps_;
    GhostPolicy ghosts_;
};

/// Wraps another flow pair with selected sub-flows replaced by the identity.
/// Used to isolate one operator in tests.
class HookedFlows final : public FlowPair {
public:
    HookedFlows(FlowPair& inner, bool disable_a, bool disable_b = false)
        : inner_(inner), disable_a_(disable_a), disable_b_(disable_b)
    {
    }

    State a_flow(const State& u, complex tau) override;
    State b_flow(const State& u, complex tau) override;
    bool accepts_complex_b() const override { return inner_.accepts_complex_b(); }

private:
    FlowPair& inner_;
    bool disable_a_;
    bool disable_b_;
};

enum class SubFlow { A, B };

/// One factor of a composition: `flow` over `coefficient`·h.
struct FlowStage {
    SubFlow flow;
    complex coefficient;
};

/// Factors of one step, in application order.
std::vector<FlowStage> composition(const SplittingScheme& scheme);

/// `substeps` copies of the scheme at h/substeps, with adjacent factors of
/// the same sub-flow merged into one.
std::vector<FlowStage> repeated_composition(const SplittingScheme& scheme, int substeps);

State apply_stages(const State& u, std::span<const FlowStage> stages, double h, FlowPair& flows);

/// One step of a splitting scheme. With `project_real` the result is the real
/// part of the composition.
State split_step(const State& u, const SplittingScheme& scheme, double h, FlowPair& flows, bool project_real = true);

/// One extrapolated step Σ_j w_j (base at h/n_j)^{n_j}.
State extrapolated_step(const State& u, const ExtrapolationRule& rule, const SplittingScheme& base, double h,
                        FlowPair& flows, bool project_real = true);

State method_step(const State& u, const Method& method, double h, FlowPair& flows, bool project_real = true);

/// Throws StabilityGuardError when complex steps meet a Dirichlet problem.
void check_backend_compatibility(const Method& method, Boundary boundary);

/// Shared, immutable resources for one problem: the grid or the cached
/// matrix exponentials, and the reference solution at final time.
class ProblemContext {
public:
    ProblemContext(ProblemSpec problem, BackendOptions options = {});

    const ProblemSpec& problem() const { return problem_; }
    const BackendOptions& options() const { return options_; }

    std::unique_ptr<FlowPair> make_flows(int substeps) const;

    /// Reference solution at final time, computed on first use.
    const std::vector<double>& reference() const;

private:
    ProblemSpec problem_;
    BackendOptions options_;
    std::optional<PeriodicGrid> grid_;
    std::shared_ptr<ExpCache> cache_;
    mutable std::once_flag reference_once_;
    mutable std::vector<double> reference_;
};

struct RunResult {
    std::string method;
    double h = 0.0;
    std::size_t steps = 0;
    Field final_state;
    double error_inf = 0.0;
    std::uint64_t work = 0;
    double wall_ms = 0.0;
};

/// Number of steps of size h in [0, T]; throws ConfigError unless h divides
/// T to 1e-9 relative.
std::size_t step_count(double final_time, double h);

RunResult integrate(const ProblemContext& context, const StepperConfig& config);
RunResult integrate(const ProblemSpec& problem, const StepperConfig& config, const BackendOptions& options = {});

struct StudyOptions {
    int substeps = 5;
    bool project_real = true;
    /// Cells evaluated concurrently; 1 runs sequentially.
    unsigned workers = 1;
};

/// Runs every (method, h) cell. A failing cell is recorded in its row and
/// does not stop the study.
ConvergenceReport convergence_study(const ProblemContext& context, const std::vector<Method>& methods,
                                    const std::vector<double>& h_values, const StudyOptions& options = {});

} // namespace opsplit
