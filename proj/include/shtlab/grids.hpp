#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shtlab/space.hpp"

namespace shtlab {

/// One cube Q of a dyadic grid. Cubes of a level are indexed in order of
/// their smallest member id.
struct DyadicCube {
    std::uint32_t grid = 0;  // 1-based grid id t
    int level = 0;           // k; sidelength is delta^k
    std::uint32_t index = 0;
    PointId center = 0;
    std::vector<PointId> members;  // ascending
    double measure = 0.0;
    double sidelength = 0.0;
    std::optional<std::uint32_t> parent;  // index at level k-1
    std::vector<std::uint32_t> children;  // indices at level k+1
};

/// Partition of the points at one scale.
struct GridLevel {
    int level = 0;
    double sidelength = 0.0;
    std::vector<std::uint32_t> cube_of;  // point -> cube index
    std::vector<DyadicCube> cubes;
};

struct DyadicGrid {
    std::uint32_t id = 1;
    std::uint64_t seed = 0;
    std::vector<GridLevel> levels;  // levels[j] holds level k_min + j
};

/// Identifies a cube inside an AdjacentGridSystem (grid is 0-based here).
struct CubeRef {
    std::uint32_t grid = 0;
    int level = 0;
    std::uint32_t index = 0;

    friend bool operator==(const CubeRef&, const CubeRef&) = default;
};

struct GridConstants {
    double c1_formula = 0.0;         // (12 A0^4)^-1
    double C1_formula = 0.0;         // 4 A0^2
    double c1_measured = 0.0;        // min over cubes of sup{c : B(z, c delta^k) in Q}
    double ball_to_cube = 0.0;       // max over balls of min mu(Q)/mu(B), Q containing B
    double cube_to_ball = 0.0;       // max over cubes of mu(B(z, C1 delta^k)) / mu(Q)
    double C = 0.0;                  // max of the two ratios
    double s_formula = 0.0;          // A (A0 / delta^3)^(log2 A)
    double s_measured = 0.0;         // NaN when some gdp is missing
    std::size_t K = 0;
};

/// K adjacent dyadic grids over one space. Plain value type; the builder
/// establishes the invariants and verify_grid_axioms re-checks them.
struct AdjacentGridSystem {
    double delta = 0.0;
    int k_min = 0;
    int k_max = 0;
    bool in_regime = true;   // 96 A0^6 delta <= 1
    bool gdp_complete = false;
    std::size_t space_size = 0;
    std::uint64_t space_fingerprint = 0;
    double a0 = 1.0;
    double a_dbl = 1.0;
    std::vector<double> mass;
    std::vector<DyadicGrid> grids;
    GridConstants constants;

    std::size_t num_levels() const { return static_cast<std::size_t>(k_max - k_min + 1); }
    std::size_t num_grids() const { return grids.size(); }
    const GridLevel& level(std::size_t grid, int k) const { return grids[grid].levels[static_cast<std::size_t>(k - k_min)]; }
    const DyadicCube& cube(const CubeRef& ref) const { return level(ref.grid, ref.level).cubes[ref.index]; }
    std::string describe() const;
};

/// Largest delta = 2^-m with 96 a0^6 delta <= 1.
double choose_delta(double a0);

/// Whether 96 a0^6 delta <= 1 (up to rounding of delta itself).
bool delta_in_regime(double a0, double delta);

struct GridBuildOptions {
    std::size_t k_max_grids = 32;
    std::uint64_t seed = 0;
};

/// Builds grids one at a time from nested greedy nets until every canonical
/// ball (b)-fits a cube of some grid and every cube has a gdp. Throws
/// InsufficientAdjacency when k_max_grids grids do not make the balls fit.
AdjacentGridSystem build_adjacent_system(const Space& space, double delta, const GridBuildOptions& options);

struct GridAxiomReport {
    std::size_t cubes_checked = 0;
    double C1 = 0.0;
    double c1_formula = 0.0;
    double c1_measured = 0.0;
    bool top_levels_single = true;
};

/// Exact check of partition (i), nesting (ii), parent/child structure (iv)
/// and outer containment with C1 = 4 A0^2. Measures the inner-ball constant.
/// Throws AxiomViolation naming grid, level and cube on the first failure.
GridAxiomReport verify_grid_axioms(const AdjacentGridSystem& system, const Space& space);

struct BallCoverage {
    bool property_b = true;
    PointId witness_center = 0;
    double witness_radius = 0.0;
    double ball_to_cube = 0.0;
};

/// Checks HK property (b) for every canonical (center, threshold) ball: the
/// ball with delta^(k+1) < r <= delta^k must lie in a level k-1 cube of some
/// grid. Also measures the ball-to-cube constant over finest containing cubes.
BallCoverage evaluate_ball_coverage(const AdjacentGridSystem& system, const Space& space);

/// Cubes Q' of the same level, in any grid, that meet Q.
std::vector<CubeRef> same_level_neighbours(const AdjacentGridSystem& system, const CubeRef& cube);

/// Generalized dyadic parent: a level k-2 cube containing every Q' in N_Q.
/// Smallest grid id wins. Throws GdpMissing when none exists or k-2 < k_min.
CubeRef generalized_dyadic_parent(const AdjacentGridSystem& system, const CubeRef& cube);

struct SConstants {
    double s_formula = 0.0;
    double s_measured = 0.0;
};

double s_formula(double a_dbl, double a0, double delta);

/// s_measured = max over cubes Q (level >= k_min + 2) and Q' in N_Q of
/// mu(Q*)/mu(Q'). Propagates GdpMissing.
SConstants compute_S(const Space& space, const AdjacentGridSystem& system);

/// One line per cube: "t k cube_index center parent_index member_ids...",
/// ordered by grid, level, smallest member id. parent_index is -1 at the top.
std::string dump_grids(const AdjacentGridSystem& system);

}  // namespace shtlab
