#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shtlab/error.hpp"
#include "shtlab/maximal.hpp"

using V = std::vector<double>;

using namespace shtlab;

namespace {

Space path3() { return oracle::make_space(3, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, oracle::unit_masses(3)); }

bool all_pass(const std::vector<CheckRecord>& recs) {
    return std::all_of(recs.begin(), recs.end(), [](const CheckRecord& r) { return r.verdict != Verdict::fail; });
}

}  // namespace

TEST_CASE("ball maximal function on the unit path") {
    const Space s = path3();
    const auto m = ball_maximal(s, V{1, 0, 0});
    CHECK(m[0] == 1.0);
    CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m[2] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    const auto m2 = ball_maximal(s, V{1, 0, 0}, 2.0);
    CHECK(m2[0] == 1.0);
    CHECK(m2[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(m2[2] == doctest::Approx(std::sqrt(1.0 / 3)).epsilon(1e-15));
    for (double r : {0.5, 1.0, 3.0}) {
        for (double v : ball_maximal(s, V{2.5, 2.5, 2.5}, r)) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
    }
    CHECK_THROWS_AS(ball_maximal(s, V{1, 0}), PreconditionError);
    CHECK_THROWS_AS(ball_maximal(s, V{1, 0, NAN}), PreconditionError);
    CHECK_THROWS_AS(ball_maximal(s, V{1, 0, 0}, 0.0), PreconditionError);
}

TEST_CASE("dyadic maximal function on two points") {
    const Space s = oracle::make_space(2, {{0, 1}, {1, 0}}, oracle::unit_masses(2));
    const auto sys = build_adjacent_system(s, 1.0 / 128, GridBuildOptions{32, 1});
    const auto md = dyadic_maximal(sys, V{1, 0});
    CHECK(md[0] == 1.0);
    CHECK(md[1] == 0.5);
    CHECK(dyadic_maximal(sys, V{4, 4}) == std::vector<double>{4, 4});
    CHECK(dyadic_maximal_1p(sys, V{1, 0}, 0.0) == md);
    // M^D_{1+eta} of (1,0): average of 1^{1+eta}/2 to the power 1/(1+eta)
    const double eta = 1e-3;
    CHECK(dyadic_maximal_1p(sys, V{1, 0}, eta)[1] == doctest::Approx(std::pow(0.5, 1.0 / (1.0 + eta))).epsilon(1e-14));
}

TEST_CASE("fast operators agree with brute force") {
    for (const char* spec : {"random_planar:20", "snowflake-path:12:0.5", "cantor:3", "discrete:6"}) {
        const Space s = generate_space(parse_generator_spec(spec), 8);
        const auto sys = build_adjacent_system(s, choose_delta(s.a0()), GridBuildOptions{32, 4});
        Rng rng(99);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> f(s.size());
            for (double& v : f) v = rng.uniform(-1, 1);
            for (double r : {1.0, 0.5, 2.0}) {
                CHECK(oracle::max_rel_diff(ball_maximal(s, f, r), oracle::ball_maximal(s, f, r)) <= 1e-12);
                CHECK(oracle::max_rel_diff(dyadic_maximal(sys, f, r), oracle::dyadic_maximal(sys, f, r)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("pointwise equivalence and structural properties") {
    const Space s = path3();
    const auto sys = build_adjacent_system(s, 1.0 / 128, GridBuildOptions{32, 2});
    for (PointId i = 0; i < 3; ++i) {
        std::vector<double> e(3, 0.0);
        e[i] = 1.0;
        const auto recs = verify_equivalence(s, sys, e);
        REQUIRE(recs.size() == 2);
        CHECK(recs[0].name == "equivalence.dyadic_le_ball");
        CHECK(all_pass(recs));
    }
    const auto single = verify_subadditivity(s, sys, {{0.3, 0.1, 0.7}});
    CHECK(all_pass(single));
    for (const auto& r : single) CHECK(r.lhs == r.rhs);
    CHECK(all_pass(verify_subadditivity(s, sys, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
    CHECK(all_pass(verify_r_monotonicity(s, sys, V{1, 0, 0}, 1.0, 2.0)));
    CHECK_THROWS_AS(verify_r_monotonicity(s, sys, V{1, 0, 0}, 2.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(verify_subadditivity(s, sys, {}), PreconditionError);
}

TEST_CASE("equivalence fails loudly when the constant is wrong") {
    const Space s = path3();
    auto sys = build_adjacent_system(s, 1.0 / 128, GridBuildOptions{32, 2});
    sys.constants.C = 0.5;  // below 1: fails already at x = 0
    const auto recs = verify_equivalence(s, sys, V{1, 0, 0});
    CHECK_FALSE(all_pass(recs));
}
