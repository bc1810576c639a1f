#pragma once

#include <string>
#include <vector>

#include "shtlab/check.hpp"
#include "shtlab/suites.hpp"

namespace shtlab {

/// Tabular section: header "name,formula,lhs,rhs,margin,verdict", one row per
/// record, RFC 4180 quoting, LF line endings.
std::string report_csv(const SuiteReport& report);

/// Machine section: provenance plus every record. Non-finite reals become null.
std::string report_json(const SuiteReport& report);

/// Inverse of report_json (non-finite numbers come back as NaN).
SuiteReport parse_report_json(const std::string& text);

std::string plot_csv(const PlotTable& table);

/// Writes report.csv, report.json and <plot>.csv into `dir`. Returns the
/// written paths.
std::vector<std::string> emit_report(const RunResult& result, const std::string& dir);

}  // namespace shtlab
