#include "opsplit/exact.hpp"

#include "opsplit/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace opsplit {

namespace {

constexpr double kPi = std::numbers::pi;

struct SimpsonState {
    const std::function<double(double)>& f;
    std::size_t budget;
    std::size_t used = 0;
    double worst = 0.0; // largest unresolved error estimate
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    ++st.used;

    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0 || st.used >= st.budget || m <= a || b <= m) {
        st.worst = std::max(st.worst, std::abs(delta) / 15.0);
        return left + right + delta / 15.0;
    }
    return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  double absolute_tolerance, std::size_t max_subdivisions)
{
    if (!(absolute_tolerance > 0.0)) throw InputError("quadrature tolerance must be positive");
    SimpsonState st{f, max_subdivisions};
    // Start from a few panels so that oscillatory integrands are not
    // mistaken for converged on the first bisection.
    constexpr int panels = 64;
    const double width = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        const double b = (p + 1 == panels) ? hi : a + width;
        const double fa = f(a);
        const double fb = f(b);
        const double fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_step(st, a, b, fa, fm, fb, whole, absolute_tolerance / panels, 50);
    }
    if (st.worst > 0.0) {
        std::ostringstream os;
        os << "adaptive Simpson did not reach tolerance " << absolute_tolerance << " within "
           << max_subdivisions << " subdivisions; achieved local error estimate " << st.worst;
        throw PrecisionError(os.str());
    }
    return total;
}

void gauss_legendre_rule(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (order == 0) throw InputError("Gauss-Legendre order must be positive");
    nodes.assign(order, 0.0);
    weights.assign(order, 0.0);
    const auto n = static_cast<double>(order);
    for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= order; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
}

double integrate_gauss_legendre(const std::function<double(double)>& f, double lo, double hi, std::size_t panels,
                                std::size_t order)
{
    if (panels == 0) throw InputError("Gauss-Legendre needs at least one panel");
    std::vector<double> x, w;
    gauss_legendre_rule(order, x, w);
    const double width = (hi - lo) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + static_cast<double>(p) * width;
        const double mid = a + 0.5 * width;
        double s = 0.0;
        for (std::size_t i = 0; i < order; ++i) s += w[i] * f(mid + 0.5 * width * x[i]);
        total += 0.5 * width * s;
    }
    return total;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, const QuadratureSpec& spec)
{
    if (spec.rule == QuadratureRule::GaussLegendre) {
        return integrate_gauss_legendre(f, lo, hi, spec.gauss_panels, spec.gauss_order);
    }
    return integrate_adaptive_simpson(f, lo, hi, spec.absolute_tolerance, spec.max_subdivisions);
}

double hopf_cole_weight(HopfColeExample example, double nu, double x)
{
    switch (example) {
    case HopfColeExample::Example2: return std::exp(-(1.0 - std::cos(kPi * x)) / (10.0 * kPi * nu));
    case HopfColeExample::Example3: return std::exp(-x * x * (3.0 - 2.0 * x) / (24.0 * nu));
    }
    return 0.0;
}

double hopf_cole_initial(HopfColeExample example, double x)
{
    switch (example) {
    case HopfColeExample::Example2: return std::sin(kPi * x) / 5.0;
    case HopfColeExample::Example3: return 0.5 * x * (1.0 - x);
    }
    return 0.0;
}

HopfColeSeries hopf_cole_coefficients(HopfColeExample example, double nu, std::size_t terms, const QuadratureSpec& quad,
                                      double t_min, double truncation_tolerance)
{
    if (!(nu > 0.0)) throw InputError("viscosity must be positive");
    if (terms < 1) throw InputError("Hopf-Cole series needs at least one term");
    if (!(t_min > 0.0)) throw InputError("t_min must be positive");

    // The weights are bounded by 1, so |c_n| <= 2 and the tail of both sums
    // is bounded by 2 Σ_{n>M} n e^{-n²π²ν t_min}.
    double tail = 0.0;
    for (std::size_t n = terms + 1;; ++n) {
        const double nn = static_cast<double>(n);
        const double term = 2.0 * nn * std::exp(-nn * nn * kPi * kPi * nu * t_min);
        tail += term;
        if (term < 1e-3 * truncation_tolerance || term == 0.0 || n > 100 * terms + 100000) break;
    }
    if (tail > truncation_tolerance) {
        std::ostringstream os;
        os << "Hopf-Cole series with " << terms << " terms has tail bound " << tail << " > " << truncation_tolerance
           << " at t_min = " << t_min << "; increase the number of terms";
        throw PrecisionError(os.str());
    }

    HopfColeSeries s;
    s.nu = nu;
    s.t_min = t_min;
    s.truncation_tolerance = truncation_tolerance;
    s.c0 = integrate([&](double x) { return hopf_cole_weight(example, nu, x); }, 0.0, 1.0, quad);
    s.c.resize(terms);
    for (std::size_t n = 1; n <= terms; ++n) {
        const double k = kPi * static_cast<double>(n);
        s.c[n - 1] =
            2.0 * integrate([&](double x) { return hopf_cole_weight(example, nu, x) * std::cos(k * x); }, 0.0, 1.0, quad);
    }
    return s;
}

double evaluate_exact(const HopfColeSeries& series, double x, double t)
{
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("Hopf-Cole evaluation point outside [0, 1]");
    if (!(t >= series.t_min)) {
        throw InputError("Hopf-Cole evaluation at t = " + std::to_string(t) + " below certified t_min = " +
                         std::to_string(series.t_min));
    }
    if (x == 0.0 || x == 1.0) return 0.0;

    double num = 0.0;
    double den = series.c0;
    for (std::size_t i = 0; i < series.c.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const double decay = std::exp(-n * n * kPi * kPi * series.nu * t);
        if (decay == 0.0) break;
        const double e = series.c[i] * decay;
        num += e * n * std::sin(n * kPi * x);
        den += e * std::cos(n * kPi * x);
    }
    if (std::abs(den) < 1e-300) throw NumericalError("Hopf-Cole denominator vanished");
    return 2.0 * series.nu * kPi * num / den;
}

double HopfColeSeries::operator()(double x, double t) const { return evaluate_exact(*this, x, t); }

} // namespace opsplit
