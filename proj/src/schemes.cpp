#include "opsplit/schemes.hpp"

#include "opsplit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace opsplit {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string joined(const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

// Expand the first half of a palindromic list.
template <typename T>
std::vector<T> mirror(std::vector<T> half, std::size_t total)
{
    std::vector<T> out(total);
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t j = std::min(i, total - 1 - i);
        out[i] = half.at(j);
    }
    return out;
}

SplittingScheme make_strang()
{
    return {"Strang", Pattern::BAB, {1.0}, {0.5, 0.5}, 2, std::nullopt};
}

SplittingScheme make_ml62()
{
    const double s5 = std::sqrt(5.0);
    const double a1 = (5.0 - s5) / 10.0;
    return {"ML62",
            Pattern::BAB,
            {a1, 1.0 / s5, a1},
            {1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0},
            2,
            std::pair{6, 2}};
}

SplittingScheme make_rc4()
{
    const complex b1{1.0 / 10.0, -1.0 / 30.0};
    const complex b2{4.0 / 15.0, 2.0 / 15.0};
    const complex b3{4.0 / 15.0, -1.0 / 5.0};
    return {"RC4", Pattern::BAB, {0.25, 0.25, 0.25, 0.25}, {b1, b2, b3, b2, b1}, 4, std::nullopt};
}

SplittingScheme make_o4()
{
    return {"O4",
            Pattern::BAB,
            mirror<double>({0.1859688195991091314, 0.3140311804008908686}, 4),
            mirror<complex>({{0.060078275263542, 0.060314841253379},
                             {0.270211839133611, -0.152903932291162},
                             {0.339419771205694, 0.185178182075567}},
                            5),
            4,
            std::nullopt};
}

SplittingScheme make_sm4()
{
    return {"SM4",
            Pattern::BAB,
            mirror<double>({0.13505265889288437, 0.36494734110711563}, 4),
            mirror<complex>({{0.018329102861074364, -0.10677008344599524},
                             {0.2784394345454581, 0.20041452008768607},
                             {0.40646292518693505, -0.18728887328338165}},
                            5),
            4,
            std::nullopt};
}

SplittingScheme make_sm64()
{
    return {"SM64",
            Pattern::BAB,
            std::vector<double>(6, 1.0 / 6.0),
            mirror<complex>({{0.05753968253968254, -0.007886748775536424},
                             {0.20476190476190473, 0.04732049265321855},
                             {0.16309523809523818, -0.11830123163304637},
                             {0.14920634920634912, 0.15773497551072851}},
                            7),
            4,
            std::pair{6, 4}};
}

std::string fmt_residual(double r)
{
    std::ostringstream os;
    os.precision(3);
    os << r;
    return os.str();
}

} // namespace

std::string_view to_string(Pattern p)
{
    return p == Pattern::BAB ? "BAB" : "ABA";
}

bool SplittingScheme::real_coefficients_only() const
{
    return std::all_of(b.begin(), b.end(), [](const complex& z) { return z.imag() == 0.0; });
}

SplittingScheme SplittingScheme::transposed() const
{
    if (!real_coefficients_only()) {
        throw ConfigError("scheme " + name +
                          " has complex b coefficients and cannot be transposed");
    }
    SplittingScheme out;
    out.name = name + (pattern == Pattern::BAB ? "-ABA" : "-BAB");
    out.pattern = pattern == Pattern::BAB ? Pattern::ABA : Pattern::BAB;
    out.a.reserve(b.size());
    for (const auto& z : b) out.a.push_back(z.real());
    out.b.assign(a.begin(), a.end());
    out.nominal_order = nominal_order;
    out.effective_order = effective_order;
    return out;
}

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0) throw InputError("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

Rational operator+(Rational x, Rational y) { return {x.num * y.den + y.num * x.den, x.den * y.den}; }
Rational operator-(Rational x, Rational y) { return {x.num * y.den - y.num * x.den, x.den * y.den}; }
Rational operator*(Rational x, Rational y) { return {x.num * y.num, x.den * y.den}; }
Rational operator/(Rational x, Rational y) { return {x.num * y.den, x.den * y.num}; }

std::size_t ExtrapolationRule::a_evaluations(std::size_t base_stages) const
{
    std::size_t total = 0;
    for (const auto& t : terms) total += static_cast<std::size_t>(t.substeps) * base_stages;
    return total;
}

const std::vector<std::string>& builtin_scheme_names()
{
    static const std::vector<std::string> names{"Strang", "ML62", "RC4", "O4", "SM4", "SM64"};
    return names;
}

const std::vector<std::string>& builtin_extrapolation_names()
{
    static const std::vector<std::string> names{"EXT4", "EXT6"};
    return names;
}

SplittingScheme builtin_scheme(std::string_view name)
{
    const std::string key = lower(name);
    if (key == "strang") return make_strang();
    if (key == "ml62") return make_ml62();
    if (key == "rc4") return make_rc4();
    if (key == "o4") return make_o4();
    if (key == "sm4") return make_sm4();
    if (key == "sm64") return make_sm64();
    throw NotFoundError("unknown splitting scheme '" + std::string(name) +
                        "'; available: " + joined(builtin_scheme_names()));
}

ExtrapolationRule builtin_extrapolation(std::string_view name)
{
    const std::string key = lower(name);
    if (key == "ext4") return {"EXT4", {{Rational(4, 3), 2}, {Rational(-1, 3), 1}}, 2};
    if (key == "ext6") {
        return {"EXT6", {{Rational(81, 40), 3}, {Rational(-16, 15), 2}, {Rational(1, 24), 1}}, 2};
    }
    throw NotFoundError("unknown extrapolation rule '" + std::string(name) +
                        "'; available: " + joined(builtin_extrapolation_names()));
}

ValidationReport validate(const SplittingScheme& s)
{
    ValidationReport report;
    auto flag = [&](std::string what, double residual) {
        report.violations.push_back({std::move(what) + ", residual " + fmt_residual(residual), residual});
    };

    if (s.a.empty() || s.b.empty()) {
        flag("empty coefficient list", 1.0);
        return report;
    }

    const double sum_a = std::accumulate(s.a.begin(), s.a.end(), 0.0);
    const complex sum_b = std::accumulate(s.b.begin(), s.b.end(), complex{});
    if (std::abs(sum_a - 1.0) > kCoefficientTolerance) flag("sum(a) != 1", std::abs(sum_a - 1.0));
    if (std::abs(sum_b - 1.0) > kCoefficientTolerance) flag("sum(b) != 1", std::abs(sum_b - 1.0));

    const bool bab = s.pattern == Pattern::BAB;
    const std::size_t expected_b = bab ? s.a.size() + 1 : s.a.size() - 1;
    if (s.b.size() != expected_b) {
        flag(std::string("len(b) != len(a) ") + (bab ? "+ 1" : "- 1"),
             std::abs(static_cast<double>(s.b.size()) - static_cast<double>(expected_b)));
    }

    for (std::size_t i = 0; i < s.a.size(); ++i) {
        const double d = std::abs(s.a[i] - s.a[s.a.size() - 1 - i]);
        if (d != 0.0) {
            flag("a not palindromic at index " + std::to_string(i + 1), d);
            break;
        }
    }
    for (std::size_t i = 0; i < s.b.size(); ++i) {
        const double d = std::abs(s.b[i] - s.b[s.b.size() - 1 - i]);
        if (d != 0.0) {
            flag("b not palindromic at index " + std::to_string(i + 1), d);
            break;
        }
    }

    const double min_a = *std::min_element(s.a.begin(), s.a.end());
    if (!(min_a > 0.0)) flag("a coefficient not positive", -min_a);
    double min_re_b = s.b.front().real();
    for (const auto& z : s.b) min_re_b = std::min(min_re_b, z.real());
    if (min_re_b < 0.0) flag("b coefficient with negative real part", -min_re_b);

    return report;
}

Rational cancellation_sum(const ExtrapolationRule& rule, int power)
{
    Rational sum(0);
    for (const auto& t : rule.terms) {
        std::int64_t n = 1;
        for (int p = 0; p < power; ++p) n *= t.substeps;
        sum = sum + t.weight / Rational(n);
    }
    return sum;
}

ValidationReport validate(const ExtrapolationRule& rule)
{
    ValidationReport report;
    if (rule.terms.empty()) {
        report.violations.push_back({"empty extrapolation rule", 1.0});
        return report;
    }
    for (const auto& t : rule.terms) {
        if (t.substeps < 1) {
            report.violations.push_back({"substep count below 1", static_cast<double>(1 - t.substeps)});
        }
    }
    const Rational total = cancellation_sum(rule, 0);
    if (!(total == Rational(1))) {
        const double r = std::abs(total.value() - 1.0);
        report.violations.push_back({"sum(w) != 1, residual " + fmt_residual(r), r});
    }
    // Each extra term removes one more even power of the step from the
    // base method's error expansion.
    for (std::size_t k = 1; k < rule.terms.size(); ++k) {
        const int power = rule.base_order + 2 * static_cast<int>(k - 1);
        const Rational s = cancellation_sum(rule, power);
        if (!(s == Rational(0))) {
            const double r = std::abs(s.value());
            report.violations.push_back(
                {"sum(w n^-" + std::to_string(power) + ") != 0, residual " + fmt_residual(r), r});
        }
    }
    return report;
}

} // namespace opsplit
