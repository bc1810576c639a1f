#include "shtlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "shtlab/check.hpp"
#include "shtlab/error.hpp"

namespace shtlab {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why, std::size_t line = 0) {
    throw ValidationError(ValidationCode::invalid_parameter, "config key '" + key + "': " + why, line);
}

double to_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, "'" + v + "' is not a number");
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        bad(key, "'" + v + "' is not a nonnegative integer");
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "convexify", "delta",       "eta",        "exponents",  "kmax_grids",  "modular",      "norm_starts",
        "norm_steps", "out_dir",    "random_samples", "rdf_samples", "rdf_tol", "s0",           "s_points",
        "safety",    "seed",        "space",      "suite",      "theta",
    };
    return keys;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"axioms", "equivalence",    "modular",     "norms",
                                                   "rdf",    "reverse-holder", "selfimprove", "all"};
    return names;
}

void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "space") c.space = value;
    else if (key == "seed") c.seed = to_uint(key, value);
    else if (key == "delta") c.delta = value == "auto" ? 0.0 : to_real(key, value);
    else if (key == "kmax_grids") c.kmax_grids = to_uint(key, value);
    else if (key == "exponents") c.exponents = value;
    else if (key == "modular") c.modular = parse_modular_kind(value);
    else if (key == "convexify") c.convexify = to_real(key, value);
    else if (key == "suite") c.suite = value;
    else if (key == "random_samples") c.random_samples = to_uint(key, value);
    else if (key == "rdf_samples") c.rdf_samples = to_uint(key, value);
    else if (key == "norm_starts") c.norm_starts = to_uint(key, value);
    else if (key == "norm_steps") c.norm_steps = to_uint(key, value);
    else if (key == "theta") c.theta = to_real(key, value);
    else if (key == "safety") c.safety = to_real(key, value);
    else if (key == "eta") c.eta = value == "auto" ? std::optional<double>() : std::optional<double>(to_real(key, value));
    else if (key == "s0") c.s0 = to_real(key, value);
    else if (key == "s_points") c.s_points = to_uint(key, value);
    else if (key == "rdf_tol") c.rdf_tol = to_real(key, value);
    else if (key == "out_dir") c.out_dir = value;
    else bad(key, "unknown key");
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(ValidationCode::parse_error, "config line is not 'key = value'", line, 1);
        }
        const std::string key = trim(raw.substr(0, eq));
        try {
            apply_config_value(base, key, trim(raw.substr(eq + 1)));
        } catch (const ValidationError& e) {
            throw ValidationError(e.code(), e.what(), line, 1);
        }
    }
    return base;
}

void validate_config(const RunConfig& c) {
    if (c.space.find(':') == std::string::npos && !std::filesystem::is_regular_file(c.space)) {
        bad("space", "'" + c.space + "' is neither a generator spec nor an existing file");
    }
    if (!(c.delta == 0.0 || (c.delta > 0.0 && c.delta < 1.0))) bad("delta", "must be auto or lie in (0, 1)");
    if (c.kmax_grids < 1 || c.kmax_grids > 1024) bad("kmax_grids", "must lie in [1, 1024]");
    if (!(c.convexify > 0.0) || !std::isfinite(c.convexify)) bad("convexify", "must be positive");
    if (std::find(suite_names().begin(), suite_names().end(), c.suite) == suite_names().end()) {
        bad("suite", "unknown suite '" + c.suite + "'");
    }
    if (c.random_samples > 100000 || c.rdf_samples > 10000) bad("random_samples", "sample counts are capped");
    if (c.norm_starts > 10000 || c.norm_steps > 10000) bad("norm_starts", "multistart counts are capped");
    if (!(c.theta > 0.0 && c.theta < 1.0)) bad("theta", "must lie in (0, 1)");
    if (!(c.safety >= 1.0) || !std::isfinite(c.safety)) bad("safety", "must be at least 1");
    if (c.eta && !(*c.eta > 0.0 && std::isfinite(*c.eta))) bad("eta", "must be positive");
    if (!(c.s0 > 1.0) || !std::isfinite(c.s0)) bad("s0", "must exceed 1");
    if (c.s_points < 1 || c.s_points > 1000) bad("s_points", "must lie in [1, 1000]");
    if (!(c.rdf_tol > 0.0 && c.rdf_tol <= 1e-6)) bad("rdf_tol", "must lie in (0, 1e-6]");
}

std::string RunConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["space"] = space;
    kv["seed"] = std::to_string(seed);
    kv["delta"] = delta == 0.0 ? "auto" : format_double(delta);
    kv["kmax_grids"] = std::to_string(kmax_grids);
    kv["exponents"] = exponents;
    kv["modular"] = to_string(modular);
    kv["convexify"] = format_double(convexify);
    kv["suite"] = suite;
    kv["random_samples"] = std::to_string(random_samples);
    kv["rdf_samples"] = std::to_string(rdf_samples);
    kv["norm_starts"] = std::to_string(norm_starts);
    kv["norm_steps"] = std::to_string(norm_steps);
    kv["theta"] = format_double(theta);
    kv["safety"] = format_double(safety);
    kv["eta"] = eta ? format_double(*eta) : "auto";
    kv["s0"] = format_double(s0);
    kv["s_points"] = std::to_string(s_points);
    kv["rdf_tol"] = format_double(rdf_tol);
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace shtlab
