#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace opsplit {

using complex = std::complex<double>;

enum class GridKind { Periodic, Dirichlet };

/// Grid-sampled solution. Values are complex so that compositions with
/// complex time steps can carry an imaginary part between projections.
struct Field {
    std::vector<complex> values;
    GridKind grid = GridKind::Periodic;
    double time = 0.0;

    static Field from_real(const std::vector<double>& samples, GridKind grid, double time = 0.0);

    std::size_t size() const { return values.size(); }
    bool is_real() const;
    double max_imag() const;
    std::vector<double> real_part() const;
};

/// Counts conservation (A) sub-flow evaluations, the cost measure used by
/// the convergence studies. Each integration owns its own counter.
struct WorkCounter {
    std::uint64_t a_evaluations = 0;
};

/// Infinity norm of the difference of the real parts.
double max_abs_difference(const std::vector<double>& x, const std::vector<double>& y);
double max_abs_difference(const Field& x, const Field& y);

} // namespace opsplit
