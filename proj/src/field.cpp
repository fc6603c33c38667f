#include "opsplit/field.hpp"

#include "opsplit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace opsplit {

Field Field::from_real(const std::vector<double>& samples, GridKind grid, double time)
{
    Field f;
    f.values.assign(samples.begin(), samples.end());
    f.grid = grid;
    f.time = time;
    return f;
}

bool Field::is_real() const
{
    return std::all_of(values.begin(), values.end(), [](const complex& z) { return z.imag() == 0.0; });
}

double Field::max_imag() const
{
    double m = 0.0;
    for (const auto& z : values) m = std::max(m, std::abs(z.imag()));
    return m;
}

std::vector<double> Field::real_part() const
{
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](const complex& z) { return z.real(); });
    return out;
}

double max_abs_difference(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) {
        throw DimensionError("length mismatch: " + std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()));
    }
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::abs(x[i] - y[i]);
        if (std::isnan(d)) return d;
        m = std::max(m, d);
    }
    return m;
}

double max_abs_difference(const Field& x, const Field& y)
{
    return max_abs_difference(x.real_part(), y.real_part());
}

} // namespace opsplit
