#include "shtlab/check.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "shtlab/numeric.hpp"

namespace shtlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double abs_rel_diff(double a, double b) {
    if (a == b) return 0.0;
    const double scale = std::max(std::abs(a), std::abs(b));
    if (!std::isfinite(scale)) return std::numeric_limits<double>::infinity();
    return std::abs(a - b) / scale;
}

std::string point_witness(std::string_view label, std::size_t x) {
    std::string w(label);
    if (!w.empty()) w += ", ";
    return w + "x=" + std::to_string(x);
}

// Smaller margin is worse; NaN (info) never wins.
bool worse(const CheckRecord& a, const CheckRecord& b) {
    if (std::isnan(a.margin)) return false;
    if (std::isnan(b.margin)) return true;
    return a.margin < b.margin;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::info: return "info";
    }
    return "info";
}

CheckRecord check_le(std::string name, std::string formula, double lhs, double rhs, double rel_slack,
                     std::string witness) {
    CheckRecord r{std::move(name), std::move(formula), lhs, rhs, -rel_excess(lhs, rhs), Verdict::pass,
                  std::move(witness)};
    const bool ok = !std::isnan(lhs) && !std::isnan(rhs) && le_rel(lhs, rhs, rel_slack);
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    if (std::isnan(r.margin)) r.margin = -std::numeric_limits<double>::infinity();
    return r;
}

CheckRecord check_eq(std::string name, std::string formula, double lhs, double rhs, double rel_slack,
                     std::string witness) {
    const double diff = abs_rel_diff(lhs, rhs);
    CheckRecord r{std::move(name), std::move(formula), lhs, rhs, -diff, Verdict::pass, std::move(witness)};
    r.verdict = diff <= rel_slack ? Verdict::pass : Verdict::fail;
    if (std::isnan(r.margin)) {
        r.margin = -std::numeric_limits<double>::infinity();
        r.verdict = Verdict::fail;
    }
    return r;
}

CheckRecord check_true(std::string name, std::string formula, bool ok, std::string witness) {
    return CheckRecord{std::move(name), std::move(formula), ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : -1.0,
                       ok ? Verdict::pass : Verdict::fail, std::move(witness)};
}

CheckRecord info(std::string name, std::string formula, double lhs, double rhs, std::string witness) {
    return CheckRecord{std::move(name), std::move(formula), lhs, rhs, kNaN, Verdict::info, std::move(witness)};
}

CheckRecord check_pointwise_le(std::string name, std::string formula, std::span<const double> lhs,
                               std::span<const double> rhs, double rel_slack, std::string_view label) {
    CheckRecord worst;
    bool first = true;
    bool all_ok = true;
    for (std::size_t x = 0; x < lhs.size(); ++x) {
        CheckRecord r = check_le(name, formula, lhs[x], rhs[x], rel_slack);
        all_ok = all_ok && r.verdict == Verdict::pass;
        if (first || worse(r, worst)) {
            worst = std::move(r);
            worst.witness = point_witness(label, x);
            first = false;
        }
    }
    if (first) worst = check_true(std::move(name), std::move(formula), true, std::string(label));
    worst.verdict = all_ok ? Verdict::pass : Verdict::fail;
    return worst;
}

CheckRecord check_pointwise_eq(std::string name, std::string formula, std::span<const double> lhs,
                               std::span<const double> rhs, double rel_slack, std::string_view label) {
    CheckRecord worst;
    bool first = true;
    bool all_ok = true;
    for (std::size_t x = 0; x < lhs.size(); ++x) {
        CheckRecord r = check_eq(name, formula, lhs[x], rhs[x], rel_slack);
        all_ok = all_ok && r.verdict == Verdict::pass;
        if (first || worse(r, worst)) {
            worst = std::move(r);
            worst.witness = point_witness(label, x);
            first = false;
        }
    }
    if (first) worst = check_true(std::move(name), std::move(formula), true, std::string(label));
    worst.verdict = all_ok ? Verdict::pass : Verdict::fail;
    return worst;
}

void SuiteReport::add(CheckRecord record) { records_.push_back(std::move(record)); }

void SuiteReport::absorb(CheckRecord record) {
    auto it = std::find_if(records_.begin(), records_.end(),
                           [&](const CheckRecord& r) { return r.name == record.name; });
    if (it == records_.end()) {
        records_.push_back(std::move(record));
        return;
    }
    const bool failed = it->verdict == Verdict::fail || record.verdict == Verdict::fail;
    if (worse(record, *it)) *it = std::move(record);
    if (failed) it->verdict = Verdict::fail;
}

void SuiteReport::absorb(const std::vector<CheckRecord>& records) {
    for (const auto& r : records) absorb(r);
}

void SuiteReport::merge(const SuiteReport& other) {
    for (const auto& r : other.records_) add(r);
    for (const auto& p : other.provenance_) provenance_.push_back(p);
}

void SuiteReport::provenance(std::string key, std::string value) {
    provenance_.emplace_back(std::move(key), std::move(value));
}

bool SuiteReport::passed() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
    return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(),
                                                  [](const CheckRecord& r) { return r.verdict == Verdict::fail; }));
}

const CheckRecord* SuiteReport::find(std::string_view name) const {
    for (const auto& r : records_)
        if (r.name == name) return &r;
    return nullptr;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace shtlab
