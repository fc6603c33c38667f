#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opsplit/errors.hpp"
#include "opsplit/fd.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace opsplit;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXd taylor_exp(const Eigen::MatrixXd& m)
{
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd term = sum;
    for (int k = 1; k < 60; ++k) {
        term = (term * m / double(k)).eval();
        sum += term;
    }
    return sum;
}

std::vector<double> odd_data(std::size_t d)
{
    std::vector<double> u;
    for (double x : DirichletGrid(d).nodes()) u.push_back(0.2 * std::sin(pi * x));
    return u;
}

} // namespace

TEST_CASE("grid")
{
    const DirichletGrid g(99);
    CHECK(g.spacing() == doctest::Approx(0.01));
    CHECK(g.node(1) == doctest::Approx(0.01));
    CHECK(g.node(99) == doctest::Approx(0.99));
    CHECK_THROWS_AS(DirichletGrid(5), DimensionError);
}

TEST_CASE("diffusion matrix structure")
{
    const auto b = build_diffusion_matrix(20);
    const double s = 12.0 / (21.0 * 21.0);
    CHECK(b(5, 5) * s == doctest::Approx(-30.0));
    CHECK(b(5, 3) * s == doctest::Approx(-1.0));
    CHECK(b(0, 0) * s == doctest::Approx(45.0));
    CHECK(b(0, 5) * s == doctest::Approx(-10.0));
    CHECK(b(19, 14) * s == doctest::Approx(-10.0));
    CHECK(b(1, 0) * s == doctest::Approx(16.0));
    // Centrosymmetric.
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) CHECK(b(i, j) == b(19 - i, 19 - j));
    }
    CHECK_THROWS_AS(build_diffusion_matrix(5), DimensionError);
}

TEST_CASE("diffusion matrix is fourth order on smooth data")
{
    auto err = [](std::size_t d) {
        const auto b = build_diffusion_matrix(d);
        const auto x = DirichletGrid(d).nodes();
        Eigen::VectorXd u(d), exact(d);
        for (std::size_t i = 0; i < d; ++i) {
            u(i) = std::sin(pi * x[i]);
            exact(i) = -pi * pi * u(i);
        }
        return (b * u - exact).cwiseAbs().maxCoeff();
    };
    const double ratio = err(50) / err(100);
    CHECK(ratio > 12.0);
}

TEST_CASE("spectral abscissa of the closures")
{
    CHECK(spectral_abscissa(build_diffusion_matrix(50)) < 0.0);
    CHECK(spectral_abscissa(build_diffusion_matrix(50, BoundaryStencil::Truncated)) < 0.0);
    CHECK(spectral_abscissa(build_diffusion_matrix(50, BoundaryStencil::Printed)) > 0.0);
    CHECK_THROWS_AS(ExpCache(build_diffusion_matrix(50, BoundaryStencil::Printed)), StabilityGuardError);
}

TEST_CASE("matrix exponential against the symmetric eigendecomposition")
{
    const auto b = build_diffusion_matrix(50, BoundaryStencil::Truncated);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    for (double nt : {1e-5, 1e-3, 0.1}) {
        const Eigen::MatrixXd oracle =
            es.eigenvectors() * (nt * es.eigenvalues().array()).exp().matrix().asDiagonal() * es.eigenvectors().transpose();
        const Eigen::MatrixXd e = matrix_exponential(Eigen::MatrixXd(nt * b));
        CHECK((e - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("matrix exponential against the Taylor series")
{
    const auto b = build_diffusion_matrix(50);
    const double norm = b.cwiseAbs().colwise().sum().maxCoeff();
    const double nt = 1.5 / norm;
    const Eigen::MatrixXd m = nt * b;
    CHECK((matrix_exponential(m) - taylor_exp(m)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("matrix exponential of small and complex matrices")
{
    Eigen::MatrixXd rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    const Eigen::MatrixXd r = matrix_exponential(Eigen::MatrixXd(pi / 3.0 * rot));
    CHECK(r(0, 0) == doctest::Approx(0.5));
    CHECK(r(1, 0) == doctest::Approx(std::sin(pi / 3.0)));

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = complex{0.0, pi};
    d(1, 1) = complex{-1.0, 0.5};
    const Eigen::MatrixXcd e = matrix_exponential(d);
    CHECK(std::abs(e(0, 0) - complex{-1.0, 0.0}) < 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(complex{-1.0, 0.5})) < 1e-14);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(matrix_exponential(bad), InputError);
}

TEST_CASE("exponential cache")
{
    ExpCache cache(build_diffusion_matrix(30));
    const auto a = cache.get(0.1, 0.5);
    const auto b = cache.get(0.1, 0.5);
    CHECK(a.get() == b.get());
    cache.get(0.1, 0.25);
    CHECK(cache.size() == 2);
}

TEST_CASE("diffusion flow")
{
    const std::size_t d = 40;
    ExpCache cache(build_diffusion_matrix(d));
    const Field u0 = Field::from_real(odd_data(d), GridKind::Dirichlet);
    const Field u = fd_diffusion_flow(u0, 0.1, 0.5, cache);
    const auto x = DirichletGrid(d).nodes();
    for (std::size_t i = 0; i < d; ++i) {
        CHECK(std::abs(u.values[i].real() - 0.2 * std::exp(-0.05 * pi * pi) * std::sin(pi * x[i])) < 1e-6);
    }
    CHECK(fd_diffusion_flow(u0, 0.1, 0.0, cache).values == u0.values);
    CHECK_THROWS_AS(fd_diffusion_flow(u0, 0.1, -0.1, cache), InadmissibleStepError);
    Field c = u0;
    c.values[3] += complex{0.0, 1e-3};
    CHECK_THROWS_AS(fd_diffusion_flow(c, 0.1, 0.1, cache), BackendError);
}

TEST_CASE("WENO weights on constant data are the linear weights")
{
    const auto r = weno5_reconstruct(2.0, 2.0, 2.0, 2.0, 2.0);
    CHECK(r.weights[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r.weights[1] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(r.weights[2] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("WENO on linear data reduces to the five-point upwind formula")
{
    const double f[5] = {0.3, 0.55, 0.8, 1.05, 1.3};
    const auto r = weno5_reconstruct(f[0], f[1], f[2], f[3], f[4]);
    const double linear = (2.0 * f[0] - 13.0 * f[1] + 47.0 * f[2] + 27.0 * f[3] - 3.0 * f[4]) / 60.0;
    CHECK(std::abs(r.value - linear) < 1e-15);
    CHECK(std::abs(r.value - 0.925) < 1e-15);
}

TEST_CASE("WENO suppresses the stencil across a jump")
{
    const auto r = weno5_reconstruct(0.0, 0.0, 0.0, 1.0, 1.0);
    CHECK(r.weights[0] > 0.99);
    CHECK(std::abs(r.value) < 1e-6);
}

TEST_CASE("WENO flux sizes")
{
    const std::vector<double> ext(12, 1.0);
    CHECK(weno_flux(ext).size() == 7);
    CHECK_THROWS_AS(weno_flux(std::vector<double>(6, 1.0)), DimensionError);
}

TEST_CASE("WENO flux difference is fifth order on smooth data")
{
    auto err = [](std::size_t d) {
        const auto u = odd_data(d);
        const auto x = DirichletGrid(d).nodes();
        const auto r = weno_rhs(u, DirichletGrid(d).spacing());
        double e = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double exact = -u[i] * 0.2 * pi * std::cos(pi * x[i]);
            e = std::max(e, std::abs(r[i] - exact));
        }
        return e;
    };
    CHECK(std::log2(err(100) / err(200)) > 4.5);
}

TEST_CASE("WENO flux difference converges at fifth order in L1")
{
    auto err = [](std::size_t d) {
        const double dx = 1.0 / double(d);
        std::vector<double> ext;
        for (int i = -3; i < int(d) + 3; ++i) ext.push_back(1.0 + 0.5 * std::sin(2.0 * pi * i * dx));
        const auto flux = weno_flux(ext);
        double e = 0.0;
        for (std::size_t j = 0; j + 1 < flux.size(); ++j) {
            const double x = double(j) * dx;
            const double exact = (1.0 + 0.5 * std::sin(2.0 * pi * x)) * pi * std::cos(2.0 * pi * x);
            e += std::abs((flux[j + 1] - flux[j]) / dx - exact) * dx;
        }
        return e;
    };
    const double slope = std::log2(err(160) / err(320));
    CHECK(slope > 4.5);
    CHECK(slope < 5.5);
}

TEST_CASE("zero ghosts lose accuracy at the boundary")
{
    const std::size_t d = 200;
    const auto u = odd_data(d);
    const double dx = DirichletGrid(d).spacing();
    const auto odd = weno_rhs(u, dx, GhostPolicy::OddReflection);
    const auto zero = weno_rhs(u, dx, GhostPolicy::Zero);
    CHECK(std::abs(zero[0] - odd[0]) > 1e-4);
    CHECK(std::abs(zero[d / 2] - odd[d / 2]) < 1e-14);
}

TEST_CASE("WENO conservation flow")
{
    const std::size_t d = 50;
    const Field u0 = Field::from_real(odd_data(d), GridKind::Dirichlet);
    WorkCounter counter;
    const Field u = weno_conservation_flow(u0, 0.1, 5, &counter);
    CHECK(counter.a_evaluations == 1);
    CHECK(u.is_real());
    const Field halves = weno_conservation_flow(weno_conservation_flow(u0, 0.05, 5), 0.05, 5);
    const Field whole = weno_conservation_flow(u0, 0.1, 10);
    CHECK(halves.values == whole.values);
    CHECK(std::abs(u.values[d / 2] - whole.values[d / 2]) < 1e-8);
    CHECK(weno_conservation_flow(u0, 0.0, 5, &counter).values == u0.values);
    CHECK(counter.a_evaluations == 2);
    CHECK_THROWS_AS(weno_conservation_flow(u0, -0.1, 5), InadmissibleStepError);
    Field c = u0;
    c.values[0] += complex{0.0, 1.0};
    CHECK_THROWS_AS(weno_conservation_flow(c, 0.1, 5), BackendError);
}
