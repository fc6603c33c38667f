#pragma once

#include "opsplit/field.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

namespace opsplit {

/// D interior unknowns of [0, 1] with homogeneous Dirichlet ends.
///
/// Nodes are x_j = j·δx, j = 1..D, δx = 1/(D+1); the boundary values are
/// never stored.
class DirichletGrid {
public:
    explicit DirichletGrid(std::size_t interior);

    std::size_t size() const { return d_; }
    double spacing() const { return 1.0 / static_cast<double>(d_ + 1); }
    double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }
    std::vector<double> nodes() const;

private:
    std::size_t d_;
};

/// Closure used for the first and last rows of the diffusion matrix.
enum class BoundaryStencil {
    /// One-sided six-point fourth-order row [45, -154, 214, -156, 61, -10].
    SixPoint,
    /// The five printed entries [45, -154, 214, -156, 61] only. Gives a
    /// matrix with eigenvalues of positive real part; kept for comparison.
    Printed,
    /// Pentadiagonal interior stencil truncated at the ends (symmetric).
    Truncated,
};

using DiffusionMatrix = Eigen::MatrixXd;

/// Fourth-order Laplacian (without ν) on the interior unknowns.
///
/// Interior rows are [-1, 16, -30, 16, -1]/(12δx²); the second and
/// second-to-last rows drop the eliminated boundary value; the first and last
/// rows follow `stencil`. The matrix is centrosymmetric by construction.
DiffusionMatrix build_diffusion_matrix(const DirichletGrid& grid,
                                       BoundaryStencil stencil = BoundaryStencil::SixPoint);

/// Size-only variant; throws DimensionError for D < 6.
DiffusionMatrix build_diffusion_matrix(std::size_t interior, BoundaryStencil stencil = BoundaryStencil::SixPoint);

/// exp(M) by scaling and squaring with the diagonal (6,6) Padé approximant.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m);

/// Largest real part over the eigenvalues of B.
double spectral_abscissa(const DiffusionMatrix& b);

/// Memoized exp(ν τ B) for one matrix B.
///
/// Entries are keyed on the exact bit patterns of (ν, τ). Lookups are safe
/// from several threads; the first thread to miss computes the entry.
class ExpCache {
public:
    /// Checks that every eigenvalue of B has negative real part, so that
    /// exp(ντB) has spectral radius below one for τ > 0. Throws
    /// StabilityGuardError otherwise.
    explicit ExpCache(DiffusionMatrix b);

    const DiffusionMatrix& matrix() const { return *b_; }

    std::shared_ptr<const Eigen::MatrixXd> get(double nu, double tau);
    std::size_t size() const;

private:
    std::shared_ptr<const DiffusionMatrix> b_;
    mutable std::shared_mutex mutex_;
    std::map<std::pair<double, double>, std::shared_ptr<const Eigen::MatrixXd>> entries_;
};

/// exp(ν τ B)·state. Requires τ ≥ 0 and a real-valued state.
Field fd_diffusion_flow(const Field& state, double nu, double tau, ExpCache& cache);

using FluxFunction = std::function<double(double)>;

/// Burgers flux u²/2.
double burgers_flux(double u);

/// One fifth-order WENO reconstruction at x_{j+1/2} from f_{j-2} .. f_{j+2},
/// upwind-biased to the left.
struct WenoReconstruction {
    double value = 0.0;
    std::array<double, 3> weights{};
};

WenoReconstruction weno5_reconstruct(double fm2, double fm1, double f0, double fp1, double fp2);

inline constexpr std::array<double, 3> kWenoLinearWeights{0.1, 0.6, 0.3};
inline constexpr double kWenoEpsilon = 1e-6;
inline constexpr std::size_t kWenoGhosts = 3;

/// Numerical fluxes f̂_{j+1/2} for an array extended by three ghost values on
/// each side.
///
/// Uses a global Lax-Friedrichs split f± = (f(u) ± αu)/2 with α = max|u|
/// over the extended array; f⁺ is reconstructed from the left and f⁻ from the
/// right by mirror symmetry. For n = u_ext.size() the result has n - 5
/// entries, entry i sitting between u_ext[i+2] and u_ext[i+3].
std::vector<double> weno_flux(std::span<const double> u_ext, const FluxFunction& f = burgers_flux);

/// How ghost values outside [0, 1] are filled for the conservation flow.
enum class GhostPolicy {
    /// Boundary node holds 0, further ghosts are the odd image of the interior.
    OddReflection,
    /// All three ghosts per side are 0.
    Zero,
};

/// Flux-difference approximation -(f̂_{j+1/2} - f̂_{j-1/2})/δx of -(u²/2)_x.
std::vector<double> weno_rhs(std::span<const double> u, double dx, GhostPolicy ghosts = GhostPolicy::OddReflection);

/// RK4 over real time τ in `substeps` equal steps on the WENO semi-discrete
/// conservation law. Counts one A-flow evaluation when `counter` is given.
Field weno_conservation_flow(const Field& state, double tau, int substeps, WorkCounter* counter = nullptr,
                             GhostPolicy ghosts = GhostPolicy::OddReflection);

} // namespace opsplit
