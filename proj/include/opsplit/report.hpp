#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace opsplit {

/// One (method, step size) cell of a convergence study.
struct ReportRow {
    std::string method;
    double h = 0.0;
    std::uint64_t work = 0;
    double error_inf = 0.0;
    double runtime_ms = 0.0;
    /// Empty unless the cell failed; then error_inf is NaN.
    std::string failure;

    bool ok() const { return failure.empty(); }
};

/// Errors below this are treated as round-off plateau when fitting slopes.
inline constexpr double kSlopeWindowLow = 1e-12;
/// Errors above this are treated as pre-asymptotic when fitting slopes.
inline constexpr double kSlopeWindowHigh = 1e-1;
inline constexpr std::size_t kMinSlopeRows = 3;

struct ConvergenceReport {
    std::vector<ReportRow> rows;
    /// Fitted slope of log(error) against log(h), per method with enough rows.
    std::vector<std::pair<std::string, double>> slopes;

    /// Sorts rows by (method, h descending) and refits the slopes.
    void finalize();

    std::optional<double> slope(const std::string& method) const;
    std::vector<ReportRow> rows_for(const std::string& method) const;
    std::vector<std::string> methods() const;
};

/// Least-squares slope of log(error) vs log(h) over the rows whose error lies
/// in [low, high]. Empty when fewer than kMinSlopeRows rows qualify.
std::optional<double> fit_slope(std::span<const ReportRow> rows, double low = kSlopeWindowLow,
                                double high = kSlopeWindowHigh);

/// Shortest round-trip decimal form with 17 significant digits.
std::string format_number(double v);

/// CSV with header `method,h,work_a_evals,error_inf,runtime_ms`, one line per
/// row, then a `# slope method=<name> value=<v>` line per fitted method.
/// runtime_ms is written as 0 unless `include_timing`, which keeps the output
/// byte-stable. Throws ConfigError on an empty report.
void emit_report(const ConvergenceReport& report, std::ostream& out, bool include_timing = false);
/// Same, to a file. Throws IoError when the path cannot be written.
void emit_report(const ConvergenceReport& report, const std::string& path, bool include_timing = false);

/// Reads back what emit_report writes.
ConvergenceReport parse_report(std::istream& in);

} // namespace opsplit
