#include "opsplit/fd.hpp"

#include "opsplit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace opsplit {

DirichletGrid::DirichletGrid(std::size_t interior) : d_(interior)
{
    if (interior < 10) {
        throw DimensionError("Dirichlet grid needs at least 10 interior unknowns, got " +
                             std::to_string(interior));
    }
}

std::vector<double> DirichletGrid::nodes() const
{
    std::vector<double> x(d_);
    for (std::size_t j = 0; j < d_; ++j) x[j] = node(j + 1);
    return x;
}

DiffusionMatrix build_diffusion_matrix(std::size_t d, BoundaryStencil stencil)
{
    if (d < 6) {
        throw DimensionError("grid too small for the five-point stencil: D = " + std::to_string(d));
    }
    const auto n = static_cast<Eigen::Index>(d);
    DiffusionMatrix b = DiffusionMatrix::Zero(n, n);
    constexpr double interior[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index o = -2; o <= 2; ++o) {
            const Eigen::Index j = i + o;
            if (j >= 0 && j < n) b(i, j) = interior[o + 2];
        }
    }

    std::vector<double> edge;
    switch (stencil) {
    case BoundaryStencil::SixPoint: edge = {45.0, -154.0, 214.0, -156.0, 61.0, -10.0}; break;
    case BoundaryStencil::Printed: edge = {45.0, -154.0, 214.0, -156.0, 61.0}; break;
    case BoundaryStencil::Truncated: break;
    }
    if (!edge.empty()) {
        b.row(0).setZero();
        b.row(n - 1).setZero();
        for (std::size_t k = 0; k < edge.size(); ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            b(0, kk) = edge[k];
            b(n - 1, n - 1 - kk) = edge[k];
        }
    }

    const double dx = 1.0 / static_cast<double>(d + 1);
    b /= 12.0 * dx * dx;
    return b;
}

DiffusionMatrix build_diffusion_matrix(const DirichletGrid& grid, BoundaryStencil stencil)
{
    return build_diffusion_matrix(grid.size(), stencil);
}

namespace {

template <typename Matrix>
Matrix pade_exponential(const Matrix& m)
{
    using Scalar = typename Matrix::Scalar;
    if (m.rows() != m.cols()) throw DimensionError("matrix exponential needs a square matrix");
    if (!m.allFinite()) throw InputError("matrix exponential of a matrix with non-finite entries");

    const auto n = m.rows();
    if (n == 0) return m;

    // Scale so that the 1-norm is at most 1/2.
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
    const Matrix a = m / std::ldexp(1.0, squarings);

    // (6,6) Padé coefficients c_k = (2q-k)! q! / ((2q)! k! (q-k)!).
    constexpr int q = 6;
    double c = 1.0;
    const Matrix id = Matrix::Identity(n, n);
    Matrix power = id;
    Matrix num = id;
    Matrix den = id;
    for (int k = 1; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = (power * a).eval();
        num += Scalar(c) * power;
        den += Scalar(k % 2 ? -c : c) * power;
    }
    Matrix r = den.partialPivLu().solve(num);
    for (int s = 0; s < squarings; ++s) r = (r * r).eval();
    return r;
}

} // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) { return pade_exponential(m); }
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m) { return pade_exponential(m); }

double spectral_abscissa(const DiffusionMatrix& b)
{
    Eigen::EigenSolver<DiffusionMatrix> solver(b, false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
    return solver.eigenvalues().real().maxCoeff();
}

ExpCache::ExpCache(DiffusionMatrix b) : b_(std::make_shared<const DiffusionMatrix>(std::move(b)))
{
    const double abscissa = spectral_abscissa(*b_);
    if (!(abscissa < 0.0)) {
        throw StabilityGuardError("diffusion matrix has an eigenvalue with real part " +
                                  std::to_string(abscissa) + " >= 0; exp(nu tau B) is not contractive");
    }
}

std::shared_ptr<const Eigen::MatrixXd> ExpCache::get(double nu, double tau)
{
    const std::pair key{nu, tau};
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto fresh = std::make_shared<const Eigen::MatrixXd>(matrix_exponential(Eigen::MatrixXd((nu * tau) * *b_)));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(fresh));
    return it->second;
}

std::size_t ExpCache::size() const
{
    std::shared_lock lock(mutex_);
    return entries_.size();
}

Field fd_diffusion_flow(const Field& state, double nu, double tau, ExpCache& cache)
{
    if (tau < 0.0) {
        throw InadmissibleStepError("finite-difference diffusion flow needs tau >= 0, got " + std::to_string(tau));
    }
    if (!state.is_real()) throw BackendError("finite-difference diffusion flow takes real data only");
    const auto n = cache.matrix().rows();
    if (static_cast<Eigen::Index>(state.size()) != n) {
        throw DimensionError("state has " + std::to_string(state.size()) + " values, matrix has " +
                             std::to_string(n) + " rows");
    }
    if (tau == 0.0) return state;

    const auto e = cache.get(nu, tau);
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = state.values[static_cast<std::size_t>(i)].real();
    const Eigen::VectorXd v = *e * u;

    Field out = state;
    for (Eigen::Index i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = v(i);
    return out;
}

double burgers_flux(double u) { return 0.5 * u * u; }

WenoReconstruction weno5_reconstruct(double fm2, double fm1, double f0, double fp1, double fp2)
{
    const double q1 = fm2 / 3.0 - 7.0 / 6.0 * fm1 + 11.0 / 6.0 * f0;
    const double q2 = -fm1 / 6.0 + 5.0 / 6.0 * f0 + fp1 / 3.0;
    const double q3 = f0 / 3.0 + 5.0 / 6.0 * fp1 - fp2 / 6.0;

    auto sq = [](double v) { return v * v; };
    const double b1 = 13.0 / 12.0 * sq(fm2 - 2.0 * fm1 + f0) + 0.25 * sq(fm2 - 4.0 * fm1 + 3.0 * f0);
    const double b2 = 13.0 / 12.0 * sq(fm1 - 2.0 * f0 + fp1) + 0.25 * sq(fm1 - fp1);
    const double b3 = 13.0 / 12.0 * sq(f0 - 2.0 * fp1 + fp2) + 0.25 * sq(3.0 * f0 - 4.0 * fp1 + fp2);

    const double w1 = kWenoLinearWeights[0] / sq(kWenoEpsilon + b1);
    const double w2 = kWenoLinearWeights[1] / sq(kWenoEpsilon + b2);
    const double w3 = kWenoLinearWeights[2] / sq(kWenoEpsilon + b3);
    const double total = w1 + w2 + w3;

    WenoReconstruction r;
    r.weights = {w1 / total, w2 / total, w3 / total};
    r.value = r.weights[0] * q1 + r.weights[1] * q2 + r.weights[2] * q3;
    return r;
}

std::vector<double> weno_flux(std::span<const double> u, const FluxFunction& f)
{
    const std::size_t n = u.size();
    if (n < 2 * kWenoGhosts + 1) {
        throw DimensionError("WENO flux needs at least 7 values (3 ghosts per side), got " + std::to_string(n));
    }
    double alpha = 0.0;
    for (double v : u) alpha = std::max(alpha, std::abs(v));

    std::vector<double> plus(n), minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fv = f(u[i]);
        plus[i] = 0.5 * (fv + alpha * u[i]);
        minus[i] = 0.5 * (fv - alpha * u[i]);
    }

    std::vector<double> flux(n - 5);
    for (std::size_t i = 0; i + 5 < n; ++i) {
        const double left = weno5_reconstruct(plus[i], plus[i + 1], plus[i + 2], plus[i + 3], plus[i + 4]).value;
        const double right =
            weno5_reconstruct(minus[i + 5], minus[i + 4], minus[i + 3], minus[i + 2], minus[i + 1]).value;
        flux[i] = left + right;
    }
    return flux;
}

std::vector<double> weno_rhs(std::span<const double> u, double dx, GhostPolicy ghosts)
{
    const std::size_t d = u.size();
    if (d < 2) throw DimensionError("WENO right-hand side needs at least 2 unknowns");
    std::vector<double> ext(d + 2 * kWenoGhosts, 0.0);
    std::copy(u.begin(), u.end(), ext.begin() + kWenoGhosts);
    if (ghosts == GhostPolicy::OddReflection) {
        // ext[2] and ext[d+3] are the boundary nodes themselves.
        ext[1] = -u[0];
        ext[0] = -u[1];
        ext[d + 4] = -u[d - 1];
        ext[d + 5] = -u[d - 2];
    }
    const std::vector<double> flux = weno_flux(ext);
    std::vector<double> rhs(d);
    for (std::size_t j = 0; j < d; ++j) rhs[j] = -(flux[j + 1] - flux[j]) / dx;
    return rhs;
}

Field weno_conservation_flow(const Field& state, double tau, int substeps, WorkCounter* counter, GhostPolicy ghosts)
{
    if (!state.is_real()) {
        throw BackendError("WENO conservation flow takes real data only (max |Im| = " +
                           std::to_string(state.max_imag()) + ")");
    }
    if (tau < 0.0) throw InadmissibleStepError("WENO conservation flow needs tau >= 0");
    if (substeps < 1) throw InputError("substeps must be at least 1");
    if (counter) ++counter->a_evaluations;
    if (tau == 0.0) return state;

    const std::size_t d = state.size();
    const double dx = 1.0 / static_cast<double>(d + 1);
    const double dt = tau / substeps;

    std::vector<double> u = state.real_part();
    std::vector<double> stage(d);
    auto shifted = [&](const std::vector<double>& k, double c) {
        for (std::size_t i = 0; i < d; ++i) stage[i] = u[i] + c * k[i];
        return std::span<const double>(stage);
    };
    for (int step = 1; step <= substeps; ++step) {
        const auto k1 = weno_rhs(u, dx, ghosts);
        const auto k2 = weno_rhs(shifted(k1, 0.5 * dt), dx, ghosts);
        const auto k3 = weno_rhs(shifted(k2, 0.5 * dt), dx, ghosts);
        const auto k4 = weno_rhs(shifted(k3, dt), dx, ghosts);
        for (std::size_t i = 0; i < d; ++i) {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(u[i])) {
                throw BlowUpError("WENO conservation flow: non-finite value at internal step " +
                                  std::to_string(step));
            }
        }
    }
    return Field::from_real(u, state.grid, state.time);
}

} // namespace opsplit
