#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shtlab/lattice.hpp"

namespace shtlab {

/// Everything a verification run depends on. Two runs with equal configs
/// (output directory aside) produce identical reports.
struct RunConfig {
    std::string space = "path:3";  // generator spec or space file
    std::uint64_t seed = 7;        // all randomness derives from this
    double delta = 0.0;            // 0: choose_delta(A0)
    std::size_t kmax_grids = 32;
    std::string exponents = "2,3,2";  // comma list cycled to n, or exponent file
    ModularKind modular = ModularKind::sum;
    double convexify = 1.0;  // X = (L^{p(.)})^(convexify)
    std::string suite = "all";
    std::size_t random_samples = 100;
    std::size_t rdf_samples = 10;
    std::size_t norm_starts = 6;
    std::size_t norm_steps = 10;
    double theta = 0.5;
    double safety = 1.5;
    std::optional<double> eta;  // reverse-holder override
    double s0 = 2.0;            // upper end of the s sweep
    std::size_t s_points = 5;
    double rdf_tol = 1e-14;
    std::string out_dir;  // not part of the run identity

    /// Canonical "key = value" lines, sorted by key, excluding out_dir.
    std::string canonical() const;
    std::uint64_t hash() const;
};

const std::vector<std::string>& config_keys();
const std::vector<std::string>& suite_names();

/// Sets one key; throws ValidationError(invalid_parameter) for unknown keys or
/// out-of-range values.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" document, '#' starts a comment.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});

/// Range checks that need every key: seeds, tolerances, sample counts.
void validate_config(const RunConfig& config);

}  // namespace shtlab
