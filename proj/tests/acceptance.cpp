// Acceptance suite: one PASS/FAIL line per criterion.
#include "opsplit/engine.hpp"
#include "opsplit/errors.hpp"
#include "opsplit/harness.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace opsplit;

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

void verdict(int id, bool pass, const std::string& detail, double seconds)
{
    std::printf("criterion %d: %s  %s  (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

void criterion(int id, const std::function<bool(std::ostringstream&)>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream detail;
    detail.precision(4);
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    verdict(id, pass, detail.str(), s);
}

// Error interpolated in log-log at the given work, or NaN outside the range.
double error_at_work(const std::vector<ReportRow>& rows, double work)
{
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double w0 = double(rows[i].work), w1 = double(rows[i + 1].work);
        if (work >= w0 && work <= w1) {
            const double s = (std::log(work) - std::log(w0)) / (std::log(w1) - std::log(w0));
            return std::exp((1 - s) * std::log(rows[i].error_inf) + s * std::log(rows[i + 1].error_inf));
        }
    }
    return std::nan("");
}

ConvergenceReport example1_study(double nu, const std::vector<std::string>& methods, int substeps = 5)
{
    const ProblemContext ctx(ProblemSpec::example1(nu, 128));
    std::vector<Method> m;
    for (const auto& n : methods) m.push_back(Method::from_name(n));
    std::vector<double> h;
    for (int n : {40, 80, 160, 320, 640}) h.push_back(2.0 * pi / n);
    StudyOptions o;
    o.substeps = substeps;
    return convergence_study(ctx, m, h, o);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }

    criterion(1, [](std::ostringstream& d) {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        for (const auto& n : builtin_scheme_names()) ok &= validate(builtin_scheme(n)).ok();
        for (const auto& n : builtin_extrapolation_names()) ok &= validate(builtin_extrapolation(n)).ok();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        d << "6 schemes + EXT4/EXT6 consistent, " << s * 1e3 << " ms";
        return ok && s < 1.0;
    });

    ConvergenceReport fig1;
    criterion(2, [&](std::ostringstream& d) {
        const auto t0 = std::chrono::steady_clock::now();
        fig1 = example1_study(0.03, {"strang", "ml62", "rc4", "o4", "sm4", "sm64", "ext4", "ext6"});
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::map<std::string, double> expected{{"Strang", 2}, {"ML62", 2}, {"RC4", 4}, {"O4", 4},
                                                     {"SM4", 4},    {"SM64", 4}, {"EXT4", 4}, {"EXT6", 6}};
        bool ok = s < 60.0;
        for (const auto& [m, p] : expected) {
            const auto slope = fig1.slope(m);
            d << m << "=" << (slope ? *slope : std::nan("")) << " ";
            ok &= slope && std::abs(*slope - p) <= 0.5;
        }
        return ok;
    });

    criterion(3, [](std::ostringstream& d) {
        const std::vector<std::string> names{"strang", "ml62", "sm64"};
        std::map<std::string, std::vector<double>> err;
        for (double nu : {0.03, 0.003}) {
            const ProblemContext ctx(ProblemSpec::example1(nu, 128, 1.0));
            for (const auto& n : names) {
                for (double h : {0.2, 0.1}) {
                    const auto r = integrate(ctx, {Method::from_name(n), h, 20});
                    err[n].push_back(r.error_inf);
                }
            }
        }
        // err[n] = {nu=.03 h=.2, nu=.03 h=.1, nu=.003 h=.2, nu=.003 h=.1}
        bool ok = true;
        for (int k : {0, 1}) {
            const double ml = err["ml62"][k] / err["ml62"][k + 2];
            const double sm = err["sm64"][k] / err["sm64"][k + 2];
            const double st = std::max(err["strang"][k] / err["strang"][k + 2], err["strang"][k + 2] / err["strang"][k]);
            d << "h=" << (k ? 0.1 : 0.2) << ": ML62 x" << ml << " SM64 x" << sm << " Strang x" << st << "; ";
            ok &= ml > 1.0 && sm > 1.0 && st < std::min(ml, sm);
        }
        return ok;
    });

    criterion(4, [&](std::ostringstream& d) {
        if (fig1.rows.empty()) fig1 = example1_study(0.03, {"strang", "ml62", "rc4", "o4", "sm4", "sm64"});
        bool ok = true;
        int compared = 0;
        for (const char* c : {"RC4", "O4", "SM4", "SM64"}) {
            for (const auto& row : fig1.rows_for(c)) {
                if (row.error_inf < kSlopeWindowLow || row.error_inf > kSlopeWindowHigh) continue;
                for (const char* base : {"Strang", "ML62"}) {
                    const double other = error_at_work(fig1.rows_for(base), double(row.work));
                    if (std::isnan(other)) continue;
                    ++compared;
                    if (!(row.error_inf < other)) {
                        ok = false;
                        d << c << " vs " << base << " at work " << row.work << " lost; ";
                    }
                }
            }
        }
        d << compared << " equal-work comparisons";
        return ok && compared >= 8;
    });

    criterion(5, [](std::ostringstream& d) {
        const ProblemContext ctx(ProblemSpec::example2(0.1, 200, 1.0));
        std::vector<Method> m{Method::from_name("strang"), Method::from_name("ml62"), Method::from_name("ext6")};
        const auto rep = convergence_study(ctx, m, {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
        const auto slope = rep.slope("EXT6");
        bool ok = slope && *slope < 6.0;
        d << "EXT6 slope " << (slope ? *slope : std::nan("")) << "; ";
        int compared = 0;
        for (const auto& row : rep.rows_for("EXT6")) {
            for (const char* base : {"Strang", "ML62"}) {
                const double other = error_at_work(rep.rows_for(base), double(row.work));
                if (std::isnan(other)) continue;
                ++compared;
                ok &= row.error_inf < other;
            }
        }
        d << compared << " equal-work comparisons";
        return ok && compared >= 3;
    });

    criterion(6, [](std::ostringstream& d) {
        // (a) single spectral modes
        const PeriodicGrid g(64);
        double ea = 0.0;
        for (int k : {1, 5, 17, 32}) {
            std::vector<double> v;
            for (double x : g.nodes()) v.push_back(std::cos(k * x));
            const Field u0 = Field::from_real(v, GridKind::Periodic);
            for (complex tau : {complex{0.5, 0.0}, complex{0.1, 0.3}}) {
                const Field u = inverse_dft(g, diffusion_flow_spectral(forward_dft(g, u0), 0.03, tau));
                const complex f = std::exp(-0.03 * double(k * k) * tau);
                for (std::size_t j = 0; j < v.size(); ++j) ea = std::max(ea, std::abs(u.values[j] - f * v[j]));
            }
        }
        // (b) two oracles for the matrix exponential
        const auto bt = build_diffusion_matrix(50, BoundaryStencil::Truncated);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bt);
        const double nt = 1e-3;
        const Eigen::MatrixXd eig =
            es.eigenvectors() * (nt * es.eigenvalues().array()).exp().matrix().asDiagonal() * es.eigenvectors().transpose();
        double eb = (matrix_exponential(Eigen::MatrixXd(nt * bt)) - eig).cwiseAbs().maxCoeff();
        const auto b = build_diffusion_matrix(50);
        const Eigen::MatrixXd m = (1.5 / b.cwiseAbs().colwise().sum().maxCoeff()) * b;
        Eigen::MatrixXd taylor = Eigen::MatrixXd::Identity(50, 50), term = taylor;
        for (int k = 1; k < 60; ++k) {
            term = (term * m / double(k)).eval();
            taylor += term;
        }
        eb = std::max(eb, (matrix_exponential(m) - taylor).cwiseAbs().maxCoeff());
        // (c) Hopf-Cole against a fine-step run
        const ProblemContext ctx(ProblemSpec::example2(0.1, 500, 1.0));
        const double ec = integrate(ctx, {Method::from_name("strang"), 1e-4}).error_inf;
        // (d) mean preserved by the conservation flow
        const PeriodicGrid g2(128);
        std::vector<double> v;
        for (double x : g2.nodes()) v.push_back(0.5 + 0.25 * std::sin(x));
        SpectralField s = forward_dft(g2, Field::from_real(v, GridKind::Periodic));
        const complex mean = s[0];
        double ed = 0.0;
        for (int i = 0; i < 50; ++i) {
            const complex before = s[0];
            s = conservation_flow_spectral(g2, s, complex{0.1, 0.0}, 5);
            ed = std::max(ed, std::abs(s[0] - before));
        }
        ed = std::max(ed, std::abs(s[0] - mean) / 50.0);
        d << "(a) " << ea << " (b) " << eb << " (c) " << ec << " (d) " << ed;
        return ea <= 1e-13 && eb <= 1e-10 && ec <= 1e-5 && ed <= 1e-13;
    });

    criterion(7, [](std::ostringstream& d) {
        std::vector<double> logn, loge;
        for (std::size_t n : {80, 160, 320, 640}) {
            const double dx = 1.0 / double(n);
            std::vector<double> ext;
            for (int i = -3; i < int(n) + 3; ++i) ext.push_back(1.0 + 0.5 * std::sin(2.0 * pi * i * dx));
            const auto flux = weno_flux(ext);
            double e = 0.0;
            for (std::size_t j = 0; j + 1 < flux.size(); ++j) {
                const double x = double(j) * dx;
                const double exact = (1.0 + 0.5 * std::sin(2.0 * pi * x)) * pi * std::cos(2.0 * pi * x);
                e += std::abs((flux[j + 1] - flux[j]) / dx - exact) * dx;
            }
            logn.push_back(std::log(dx));
            loge.push_back(std::log(e));
        }
        double mx = 0, my = 0, sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < logn.size(); ++i) {
            mx += logn[i] / logn.size();
            my += loge[i] / loge.size();
        }
        for (std::size_t i = 0; i < logn.size(); ++i) {
            sxy += (logn[i] - mx) * (loge[i] - my);
            sxx += (logn[i] - mx) * (logn[i] - mx);
        }
        const double slope = sxy / sxx;
        const auto w = weno5_reconstruct(0.7, 0.7, 0.7, 0.7, 0.7).weights;
        const bool weights = std::abs(w[0] - 0.1) < 1e-15 && std::abs(w[1] - 0.6) < 1e-15 && std::abs(w[2] - 0.3) < 1e-15;
        d << "slope " << slope << ", constant-data weights " << w[0] << "," << w[1] << "," << w[2];
        return std::abs(slope - 5.0) <= 0.5 && weights;
    });

    criterion(8, [](std::ostringstream& d) {
        bool ok = true;
        for (const char* n : {"rc4", "o4", "sm4", "sm64"}) {
            for (const char* preset : {"example2", "example3"}) {
                ExperimentConfig cfg;
                cfg.preset = preset;
                cfg.methods = {n};
                const auto t0 = std::chrono::steady_clock::now();
                bool guarded = false;
                try {
                    run_convergence(cfg);
                } catch (const StabilityGuardError&) {
                    guarded = true;
                }
                const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                ok &= guarded && s < 0.5;
            }
        }
        d << "complex schemes refused on Dirichlet presets before any compute";
        return ok;
    });

    criterion(9, [&](std::ostringstream& d) {
        if (cli.empty()) {
            d << "no --cli given";
            return false;
        }
        const std::string a = "acceptance_run_a.csv", b = "acceptance_run_b.csv";
        const std::string args = " converge --preset example2 --nu 0.1 --methods strang,ml62,ext4,ext6 --resolution 100 --output ";
        const int ra = std::system((cli + args + a).c_str());
        const int rb = std::system((cli + args + b + " --workers 3").c_str());
        const std::string ca = read_file(a), cb = read_file(b);
        d << "exit " << ra << "/" << rb << ", " << ca.size() << " bytes";
        return ra == 0 && rb == 0 && !ca.empty() && ca == cb;
    });

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
