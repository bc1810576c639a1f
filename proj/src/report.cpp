#include "shtlab/report.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

#include <json.hpp>

#include "shtlab/error.hpp"
#include "shtlab/io.hpp"

namespace shtlab {

namespace {

using nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

double from_json(const ordered_json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

Verdict parse_verdict(const std::string& s) {
    if (s == "pass") return Verdict::pass;
    if (s == "fail") return Verdict::fail;
    if (s == "info") return Verdict::info;
    throw ValidationError(ValidationCode::parse_error, "unknown verdict '" + s + "'");
}

}  // namespace

std::string report_csv(const SuiteReport& report) {
    std::string out = "name,formula,lhs,rhs,margin,verdict\n";
    for (const auto& r : report.records()) {
        out += csv_field(r.name) + ',' + csv_field(r.formula) + ',' + format_double(r.lhs) + ',' +
               format_double(r.rhs) + ',' + format_double(r.margin) + ',' + to_string(r.verdict) + '\n';
    }
    return out;
}

std::string report_json(const SuiteReport& report) {
    ordered_json doc;
    doc["suite"] = report.suite();
    ordered_json prov = ordered_json::object();
    for (const auto& [k, v] : report.provenance()) prov[k] = v;
    doc["provenance"] = prov;
    doc["passed"] = report.passed();
    doc["failures"] = report.failures();
    ordered_json recs = ordered_json::array();
    for (const auto& r : report.records()) {
        recs.push_back({{"name", r.name},
                        {"formula", r.formula},
                        {"lhs", number(r.lhs)},
                        {"rhs", number(r.rhs)},
                        {"margin", number(r.margin)},
                        {"verdict", to_string(r.verdict)},
                        {"witness", r.witness}});
    }
    doc["records"] = recs;
    return doc.dump(2) + "\n";
}

SuiteReport parse_report_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(ValidationCode::parse_error, std::string("report is not valid JSON: ") + e.what());
    }
    try {
        SuiteReport out(doc.at("suite").get<std::string>());
        for (const auto& [k, v] : doc.at("provenance").items()) out.provenance(k, v.get<std::string>());
        for (const auto& r : doc.at("records")) {
            CheckRecord rec;
            rec.name = r.at("name").get<std::string>();
            rec.formula = r.at("formula").get<std::string>();
            rec.lhs = from_json(r.at("lhs"));
            rec.rhs = from_json(r.at("rhs"));
            rec.margin = from_json(r.at("margin"));
            rec.verdict = parse_verdict(r.at("verdict").get<std::string>());
            rec.witness = r.value("witness", "");
            out.add(std::move(rec));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(ValidationCode::malformed_dimensions, std::string("report JSON lacks a field: ") + e.what());
    }
}

std::string plot_csv(const PlotTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_field(table.columns[i]);
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += '\n';
    }
    return out;
}

std::vector<std::string> emit_report(const RunResult& result, const std::string& dir) {
    const std::filesystem::path base(dir.empty() ? "." : dir);
    std::vector<std::string> written;
    auto put = [&](const std::string& file, const std::string& contents) {
        const std::string path = (base / file).string();
        write_file(path, contents);
        written.push_back(path);
    };
    put("report.csv", report_csv(result.report));
    put("report.json", report_json(result.report));
    for (const auto& plot : result.plots) put(plot.name + ".csv", plot_csv(plot));
    return written;
}

}  // namespace shtlab
