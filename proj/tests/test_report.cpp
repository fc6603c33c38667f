#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opsplit/errors.hpp"
#include "opsplit/report.hpp"

#include <cmath>
#include <sstream>

using namespace opsplit;

namespace {

ConvergenceReport sample(std::size_t n = 4)
{
    ConvergenceReport r;
    double h = 0.4;
    for (std::size_t i = 0; i < n; ++i, h /= 2) r.rows.push_back({"Strang", h, 10u << i, 0.3 * h * h, 1.5, {}});
    r.finalize();
    return r;
}

} // namespace

TEST_CASE("empty reports are refused")
{
    std::ostringstream os;
    CHECK_THROWS_AS(emit_report(ConvergenceReport{}, os), ConfigError);
}

TEST_CASE("rows and slope lines")
{
    std::ostringstream os;
    emit_report(sample(), os);
    std::istringstream in(os.str());
    std::string line;
    int data = 0, slopes = 0;
    std::getline(in, line);
    CHECK(line == "method,h,work_a_evals,error_inf,runtime_ms");
    while (std::getline(in, line)) {
        if (line.rfind("# slope", 0) == 0) ++slopes;
        else ++data;
    }
    CHECK(data == 4);
    CHECK(slopes == 1);
    CHECK(os.str().find("# slope method=Strang value=2") != std::string::npos);
}

TEST_CASE("timing is written only on request")
{
    std::ostringstream a, b;
    emit_report(sample(), a);
    emit_report(sample(), b, true);
    CHECK(a.str().find(",0\n") != std::string::npos);
    CHECK(b.str().find(",1.5\n") != std::string::npos);
}

TEST_CASE("round trip")
{
    ConvergenceReport r = sample(5);
    r.rows.push_back({"EXT4", 0.1, 30, 1e-6, 0.0, {}});
    r.rows.push_back({"EXT4", 0.05, 60, std::nan(""), 0.0, "blow-up at step 3"});
    r.finalize();
    std::ostringstream os;
    emit_report(r, os);
    std::istringstream in(os.str());
    ConvergenceReport back = parse_report(in);
    REQUIRE(back.rows.size() == r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(back.rows[i].method == r.rows[i].method);
        CHECK(back.rows[i].h == r.rows[i].h);
        CHECK(back.rows[i].work == r.rows[i].work);
        CHECK(back.rows[i].failure == r.rows[i].failure);
    }
    const auto embedded = back.slope("Strang");
    REQUIRE(embedded);
    const auto refit = fit_slope(back.rows_for("Strang"));
    REQUIRE(refit);
    CHECK(std::abs(*embedded - *refit) < 1e-9);
    CHECK_FALSE(back.slope("EXT4"));
}

TEST_CASE("rows are sorted by method then decreasing h")
{
    ConvergenceReport r;
    r.rows.push_back({"b", 0.1, 1, 1e-3, 0, {}});
    r.rows.push_back({"a", 0.1, 1, 1e-3, 0, {}});
    r.rows.push_back({"b", 0.2, 1, 1e-3, 0, {}});
    r.finalize();
    CHECK(r.rows[0].method == "a");
    CHECK(r.rows[1].h == 0.2);
    CHECK(r.methods() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("slope window")
{
    std::vector<ReportRow> rows;
    double h = 0.1;
    for (int i = 0; i < 6; ++i, h /= 2) rows.push_back({"x", h, 1, std::pow(h, 4), 0, {}});
    // h^4 drops below 1e-12 after a few halvings.
    const auto s = fit_slope(rows);
    REQUIRE(s);
    CHECK(*s == doctest::Approx(4.0));
    rows.resize(2);
    CHECK_FALSE(fit_slope(rows));
}

TEST_CASE("number formatting")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(256) == "256");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("unwritable paths")
{
    CHECK_THROWS_AS(emit_report(sample(), std::string("/nonexistent-dir/x.csv")), IoError);
}
