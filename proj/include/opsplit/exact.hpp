#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace opsplit {

/// Initial data with a closed-form Hopf-Cole solution on [0, 1].
enum class HopfColeExample {
    /// u0 = sin(πx)/5
    Example2,
    /// u0 = x(1-x)/2
    Example3,
};

enum class QuadratureRule { AdaptiveSimpson, GaussLegendre };

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::AdaptiveSimpson;
    double absolute_tolerance = 1e-12;
    std::size_t max_subdivisions = std::size_t{1} << 20;
    /// Composite Gauss-Legendre layout; 16 panels of 16 nodes by default.
    std::size_t gauss_panels = 16;
    std::size_t gauss_order = 16;
};

/// Adaptive Simpson quadrature with Richardson correction. Throws
/// PrecisionError when the tolerance is not met within the subdivision budget.
double integrate_adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  double absolute_tolerance, std::size_t max_subdivisions);

/// Composite Gauss-Legendre rule with `panels` equal panels of `order` nodes.
double integrate_gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                                std::size_t panels, std::size_t order);

/// Nodes and weights of the `order`-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre_rule(std::size_t order, std::vector<double>& nodes, std::vector<double>& weights);

double integrate(const std::function<double(double)>& f, double lo, double hi, const QuadratureSpec& spec);

/// Truncated cosine series of the Hopf-Cole potential:
///
///   u(x,t) = 2νπ Σ n c_n e^{-n²π²νt} sin(nπx) / (c0 + Σ c_n e^{-n²π²νt} cos(nπx))
struct HopfColeSeries {
    double nu = 0.0;
    double c0 = 0.0;
    std::vector<double> c; // c_1 .. c_M
    double t_min = 0.05;
    double truncation_tolerance = 1e-13;

    std::size_t terms() const { return c.size(); }
    double operator()(double x, double t) const;
};

/// Weight function e^{-φ(x)/(2ν)} whose cosine moments give the coefficients.
double hopf_cole_weight(HopfColeExample example, double nu, double x);

/// Computes c0 and c_1..c_M. Throws PrecisionError when the quadrature fails
/// or when M terms cannot bound the tail below `truncation_tolerance` for
/// t ≥ t_min.
HopfColeSeries hopf_cole_coefficients(HopfColeExample example, double nu, std::size_t terms = 100,
                                      const QuadratureSpec& quad = {}, double t_min = 0.05,
                                      double truncation_tolerance = 1e-13);

/// Value of the series at x ∈ [0, 1], t ≥ t_min. Exactly 0 at x = 0 and x = 1.
double evaluate_exact(const HopfColeSeries& series, double x, double t);

/// Initial profile matching each example.
double hopf_cole_initial(HopfColeExample example, double x);

} // namespace opsplit
