#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opsplit {

using complex = std::complex<double>;

/// Order in which the two sub-flows alternate inside one step.
///
/// BAB: B first and last, m A-stages, m+1 B-stages.
/// ABA: A first and last, m+1 A-stages, m B-stages.
enum class Pattern { BAB, ABA };

std::string_view to_string(Pattern p);

/// A named composition scheme.
///
/// `a` are the (real, positive) fractions of the step given to the
/// conservation flow, `b` the (possibly complex) fractions given to the
/// diffusion flow. Coefficients are stored in application order: `b[0]`
/// (BAB) or `a[0]` (ABA) is applied first.
struct SplittingScheme {
    std::string name;
    Pattern pattern = Pattern::BAB;
    std::vector<double> a;
    std::vector<complex> b;
    int nominal_order = 2;
    std::optional<std::pair<int, int>> effective_order;

    /// Number of A-flow evaluations per step.
    std::size_t a_stages() const { return a.size(); }

    /// True iff every b has an exactly zero imaginary part.
    bool real_coefficients_only() const;

    /// Swap the roles of the two coefficient lists, turning a BAB scheme into
    /// the ABA scheme with the same coefficient values. Only defined when `b`
    /// is real, since A-flow coefficients must be real.
    SplittingScheme transposed() const;
};

/// Exact rational number, used for extrapolation weights.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(Rational x, Rational y);
    friend Rational operator-(Rational x, Rational y);
    friend Rational operator*(Rational x, Rational y);
    friend Rational operator/(Rational x, Rational y);
    friend bool operator==(const Rational&, const Rational&) = default;
};

struct ExtrapolationTerm {
    Rational weight;
    int substeps = 1;
};

/// Weighted combination of a base method run with different substep counts.
struct ExtrapolationRule {
    std::string name;
    std::vector<ExtrapolationTerm> terms;
    int base_order = 2;

    /// Order obtained once the even error terms up to the rule's reach cancel.
    int target_order() const { return base_order + 2 * (static_cast<int>(terms.size()) - 1); }

    /// A-flow evaluations per step when the base has `base_stages` A-stages.
    std::size_t a_evaluations(std::size_t base_stages) const;
};

struct Violation {
    std::string invariant;
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Tolerance used by the consistency checks.
inline constexpr double kCoefficientTolerance = 1e-12;

/// Builtin coefficient set. Name lookup ignores case; throws NotFoundError.
SplittingScheme builtin_scheme(std::string_view name);

/// Builtin extrapolation rule (EXT4, EXT6). Throws NotFoundError.
ExtrapolationRule builtin_extrapolation(std::string_view name);

const std::vector<std::string>& builtin_scheme_names();
const std::vector<std::string>& builtin_extrapolation_names();

ValidationReport validate(const SplittingScheme& scheme);
ValidationReport validate(const ExtrapolationRule& rule);

/// Sum over terms of w_j * n_j^(-power), in exact arithmetic.
Rational cancellation_sum(const ExtrapolationRule& rule, int power);

} // namespace opsplit
