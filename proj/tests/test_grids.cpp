#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shtlab/error.hpp"
#include "shtlab/grids.hpp"

using namespace shtlab;

namespace {

Space two_points() { return oracle::make_space(2, {{0, 1}, {1, 0}}, oracle::unit_masses(2)); }
Space path3() { return oracle::make_space(3, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, oracle::unit_masses(3)); }

AdjacentGridSystem build(const Space& s, double delta, std::uint64_t seed = 11) {
    return build_adjacent_system(s, delta, GridBuildOptions{32, seed});
}

// Property (b) by brute force: each ball {y : d(c,y) <= d(c,z)} with open
// radius r, delta^(k+1) < r <= delta^k, sits in one level k-1 cube of some grid.
bool property_b_naive(const AdjacentGridSystem& sys, const Space& s) {
    for (PointId c = 0; c < s.size(); ++c) {
        for (PointId z = 0; z < s.size(); ++z) {
            const double r = std::nextafter(s.dist(c, z), INFINITY);
            int k = sys.k_min - 1;
            while (!(std::pow(sys.delta, k + 1) < r)) ++k;
            const int need = std::clamp(k - 1, sys.k_min, sys.k_max);
            bool ok = false;
            for (std::size_t g = 0; g < sys.num_grids() && !ok; ++g) {
                const auto& lvl = sys.level(g, need);
                bool inside = true;
                for (PointId y = 0; y < s.size(); ++y) {
                    if (s.dist(c, y) <= s.dist(c, z) && lvl.cube_of[y] != lvl.cube_of[c]) inside = false;
                }
                ok = inside;
            }
            if (!ok) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("delta choice") {
    CHECK(choose_delta(1.0) == 1.0 / 128);
    CHECK(choose_delta(2.0) == 1.0 / 8192);
    CHECK(delta_in_regime(1.0, 1.0 / 96));
    CHECK_FALSE(delta_in_regime(1.0, 1.0 / 64));
    CHECK(s_formula(2.0, 1.0, 1.0 / 96) == doctest::Approx(1769472.0).epsilon(1e-12));
}

TEST_CASE("two-point system by hand") {
    const Space s = two_points();
    const auto sys = build(s, 1.0 / 128);
    REQUIRE(sys.num_grids() == 1);
    CHECK(sys.k_max == 0);
    const auto& top = sys.level(0, -1);
    REQUIRE(top.cubes.size() == 1);
    CHECK(top.cubes[0].members == std::vector<PointId>{0, 1});
    const auto& bottom = sys.level(0, 0);
    REQUIRE(bottom.cubes.size() == 2);
    CHECK(bottom.cubes[0].members == std::vector<PointId>{0});
    CHECK(bottom.cubes[1].members == std::vector<PointId>{1});
    CHECK(sys.constants.C == 2.0);
    CHECK(sys.constants.s_measured == 2.0);

    const GridAxiomReport rep = verify_grid_axioms(sys, s);
    CHECK(rep.c1_measured >= 1.0 / 12);
    CHECK(rep.top_levels_single);

    const CubeRef leaf{0, 0, bottom.cube_of[0]};
    CHECK(same_level_neighbours(sys, leaf) == std::vector<CubeRef>{leaf});
    const CubeRef gdp = generalized_dyadic_parent(sys, leaf);
    CHECK(gdp.level == -2);
    CHECK(sys.cube(gdp).members == std::vector<PointId>{0, 1});
    CHECK_THROWS_AS(generalized_dyadic_parent(sys, CubeRef{0, sys.k_min, 0}), GdpMissing);
    CHECK_THROWS_AS(generalized_dyadic_parent(sys, CubeRef{0, sys.k_min + 1, 0}), GdpMissing);
    CHECK(compute_S(s, sys).s_measured == 2.0);
}

TEST_CASE("three-point path covers every canonical ball") {
    const Space s = path3();
    const auto sys = build(s, 1.0 / 128);
    const BallCoverage cov = evaluate_ball_coverage(sys, s);
    CHECK(cov.property_b);
    CHECK(std::isfinite(cov.ball_to_cube));
    CHECK(property_b_naive(sys, s));
    CHECK_NOTHROW(verify_grid_axioms(sys, s));
    CHECK(sys.constants.C1_formula == 4.0);
    CHECK(sys.constants.c1_formula == doctest::Approx(1.0 / 12));
}

TEST_CASE("corrupted systems are rejected") {
    const Space s = path3();
    const auto good = build(s, 1.0 / 128);

    auto bad_parent = good;
    auto& lvl = bad_parent.grids[0].levels.back();
    REQUIRE(lvl.cubes.size() >= 2);
    lvl.cubes[0].parent = 999;
    CHECK_THROWS_AS(verify_grid_axioms(bad_parent, s), AxiomViolation);

    auto overlap = good;
    auto& bottom = overlap.grids[0].levels.back();
    bottom.cubes[0].members.push_back(bottom.cubes[1].members.front());
    CHECK_THROWS_AS(verify_grid_axioms(overlap, s), AxiomViolation);

    CHECK_THROWS_AS(verify_grid_axioms(good, two_points()), PreconditionError);
}

TEST_CASE("seeded spaces satisfy the axioms") {
    for (const char* spec : {"random_planar:24", "snowflake-path:16:0.5", "discrete:7", "cantor:4",
                             "snowflake-random_planar:12:2", "grid2d:4"}) {
        const Space s = generate_space(parse_generator_spec(spec), 3);
        const auto sys = build(s, choose_delta(s.a0()));
        CHECK_MESSAGE(sys.in_regime, spec);
        CHECK_NOTHROW(verify_grid_axioms(sys, s));
        CHECK_MESSAGE(property_b_naive(sys, s), spec);
        CHECK(evaluate_ball_coverage(sys, s).property_b);
        CHECK(sys.gdp_complete);
        CHECK(sys.constants.s_measured <= sys.constants.s_formula);
        CHECK(sys.constants.s_measured >= 1.0);
        // partition of every level, checked directly
        for (const auto& grid : sys.grids) {
            for (const auto& level : grid.levels) {
                std::vector<int> seen(s.size(), 0);
                for (const auto& q : level.cubes) {
                    for (PointId y : q.members) ++seen[y];
                }
                CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
            }
        }
    }
}

TEST_CASE("an out-of-regime delta either adds grids or reports the failure") {
    const Space s = generate_space(parse_generator_spec("random_planar:20"), 4);
    for (double delta : {0.5, 0.25}) {
        try {
            const auto sys = build_adjacent_system(s, delta, GridBuildOptions{8, 9});
            CHECK_FALSE(sys.in_regime);
            CHECK(evaluate_ball_coverage(sys, s).property_b);
            CHECK_NOTHROW(verify_grid_axioms(sys, s));
        } catch (const InsufficientAdjacency& e) {
            CHECK(e.radius() > 0.0);
        }
    }
    CHECK_THROWS_AS(build_adjacent_system(s, 1.5, GridBuildOptions{8, 9}), PreconditionError);
}

TEST_CASE("grid dumps are deterministic") {
    const Space s = generate_space(parse_generator_spec("random_planar:16"), 2);
    const auto a = dump_grids(build(s, choose_delta(s.a0()), 5));
    const auto b = dump_grids(build(s, choose_delta(s.a0()), 5));
    CHECK(a == b);
    CHECK(a.find("1 ") == 0);
}
