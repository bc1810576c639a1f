#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shtlab {

/// Relative slacks. Exact-enumeration checks use `exact`, checks through the
/// Luxemburg solver use `solver`, checks downstream of a truncated series use
/// `truncation`.
namespace slack {
inline constexpr double exact = 1e-12;
inline constexpr double solver = 1e-10;
inline constexpr double truncation = 1e-9;
}  // namespace slack

enum class Verdict { pass, fail, info };

const char* to_string(Verdict v);

/// One row of a report. `margin` is the relative room left: -(lhs - rhs)/scale
/// for inequalities, -|lhs - rhs|/scale for equalities, NaN for info rows.
struct CheckRecord {
    std::string name;
    std::string formula;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    Verdict verdict = Verdict::info;
    std::string witness;
};

CheckRecord check_le(std::string name, std::string formula, double lhs, double rhs, double rel_slack,
                     std::string witness = {});
CheckRecord check_eq(std::string name, std::string formula, double lhs, double rhs, double rel_slack,
                     std::string witness = {});
CheckRecord check_true(std::string name, std::string formula, bool ok, std::string witness = {});
CheckRecord info(std::string name, std::string formula, double lhs, double rhs = 0.0, std::string witness = {});

/// lhs(x) <= rhs(x) at every point; keeps the tightest point as the witness.
CheckRecord check_pointwise_le(std::string name, std::string formula, std::span<const double> lhs,
                               std::span<const double> rhs, double rel_slack, std::string_view label = {});
CheckRecord check_pointwise_eq(std::string name, std::string formula, std::span<const double> lhs,
                               std::span<const double> rhs, double rel_slack, std::string_view label = {});

/// Ordered collection of records. Records absorbed under an existing name are
/// merged into a worst case: a fail anywhere fails the row, and the row keeps
/// the values of the instance with the smallest margin.
class SuiteReport {
public:
    explicit SuiteReport(std::string suite = {}) : suite_(std::move(suite)) {}

    void add(CheckRecord record);
    void absorb(CheckRecord record);
    void absorb(const std::vector<CheckRecord>& records);
    void merge(const SuiteReport& other);
    void provenance(std::string key, std::string value);

    bool passed() const;
    std::size_t failures() const;
    const std::string& suite() const noexcept { return suite_; }
    const std::vector<CheckRecord>& records() const noexcept { return records_; }
    const std::vector<std::pair<std::string, std::string>>& provenance() const noexcept { return provenance_; }
    const CheckRecord* find(std::string_view name) const;

private:
    std::string suite_;
    std::vector<CheckRecord> records_;
    std::vector<std::pair<std::string, std::string>> provenance_;
};

/// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite).
std::string format_double(double v);

}  // namespace shtlab
