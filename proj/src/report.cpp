#include "opsplit/report.hpp"

#include "opsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace opsplit {

void ConvergenceReport::finalize()
{
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& x, const ReportRow& y) {
        if (x.method != y.method) return x.method < y.method;
        return x.h > y.h;
    });
    slopes.clear();
    for (const auto& m : methods()) {
        const auto r = rows_for(m);
        if (auto s = fit_slope(r)) slopes.emplace_back(m, *s);
    }
}

std::optional<double> ConvergenceReport::slope(const std::string& method) const
{
    for (const auto& [m, s] : slopes) {
        if (m == method) return s;
    }
    return std::nullopt;
}

std::vector<ReportRow> ConvergenceReport::rows_for(const std::string& method) const
{
    std::vector<ReportRow> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
                 [&](const ReportRow& r) { return r.method == method; });
    return out;
}

std::vector<std::string> ConvergenceReport::methods() const
{
    std::vector<std::string> out;
    for (const auto& r : rows) {
        if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
    }
    return out;
}

std::optional<double> fit_slope(std::span<const ReportRow> rows, double low, double high)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
        if (!r.ok() || !(r.h > 0.0)) continue;
        if (!(r.error_inf >= low && r.error_inf <= high)) continue;
        pts.emplace_back(std::log(r.h), std::log(r.error_inf));
    }
    if (pts.size() < kMinSlopeRows) return std::nullopt;

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

double parse_number(const std::string& s)
{
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw InputError("malformed number '" + s + "' in report");
    return v;
}

} // namespace

void emit_report(const ConvergenceReport& report, std::ostream& out, bool include_timing)
{
    if (report.rows.empty()) throw ConfigError("refusing to write an empty convergence report");
    out << "method,h,work_a_evals,error_inf,runtime_ms\n";
    for (const auto& r : report.rows) {
        out << r.method << ',' << format_number(r.h) << ',' << r.work << ',' << format_number(r.error_inf) << ','
            << format_number(include_timing ? r.runtime_ms : 0.0) << '\n';
    }
    for (const auto& [m, s] : report.slopes) out << "# slope method=" << m << " value=" << format_number(s) << '\n';
    for (const auto& r : report.rows) {
        if (!r.ok()) {
            out << "# failure method=" << r.method << " h=" << format_number(r.h) << " reason=" << one_line(r.failure)
                << '\n';
        }
    }
}

void emit_report(const ConvergenceReport& report, const std::string& path, bool include_timing)
{
    std::ostringstream buffer;
    emit_report(report, buffer, include_timing);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << buffer.str();
    file.flush();
    if (!file) throw IoError("failed writing '" + path + "'");
}

ConvergenceReport parse_report(std::istream& in)
{
    ConvergenceReport report;
    std::string line;
    if (!std::getline(in, line) || line != "method,h,work_a_evals,error_inf,runtime_ms") {
        throw InputError("report does not start with the expected header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# slope ", 0) == 0) {
            const auto m = line.find("method=");
            const auto v = line.find(" value=");
            if (m == std::string::npos || v == std::string::npos) throw InputError("malformed slope line: " + line);
            report.slopes.emplace_back(line.substr(m + 7, v - m - 7), parse_number(line.substr(v + 7)));
            continue;
        }
        if (line.rfind("# failure ", 0) == 0) {
            const auto m = line.find("method=");
            const auto hp = line.find(" h=");
            const auto rp = line.find(" reason=");
            if (m == std::string::npos || hp == std::string::npos || rp == std::string::npos) {
                throw InputError("malformed failure line: " + line);
            }
            const std::string method = line.substr(m + 7, hp - m - 7);
            const double h = parse_number(line.substr(hp + 3, rp - hp - 3));
            for (auto& r : report.rows) {
                if (r.method == method && r.h == h) r.failure = line.substr(rp + 8);
            }
            continue;
        }
        if (line[0] == '#') continue;

        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) throw InputError("report row does not have 5 fields: " + line);
        ReportRow r;
        r.method = cells[0];
        r.h = parse_number(cells[1]);
        r.work = std::stoull(cells[2]);
        r.error_inf = parse_number(cells[3]);
        r.runtime_ms = parse_number(cells[4]);
        report.rows.push_back(std::move(r));
    }
    return report;
}

} // namespace opsplit
