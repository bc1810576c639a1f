#include <doctest.h>

#include "oracles.hpp"
#include "shtlab/error.hpp"
#include "shtlab/io.hpp"
#include "shtlab/space.hpp"

using namespace shtlab;

namespace {

Space path3() { return oracle::make_space(3, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, oracle::unit_masses(3)); }
Space squared_path3() { return oracle::make_space(3, {{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}, oracle::unit_masses(3)); }
Space two_points() { return oracle::make_space(2, {{0, 1}, {1, 0}}, oracle::unit_masses(2)); }

}  // namespace

TEST_CASE("quasi-metric constant") {
    CHECK(path3().a0() == 1.0);
    CHECK(squared_path3().a0() == 2.0);
    CHECK(two_points().a0() == 1.0);
    CHECK(compute_quasi_metric_constant(squared_path3()) == 2.0);
}

TEST_CASE("doubling constant") {
    CHECK(two_points().doubling() == 2.0);
    CHECK(path3().doubling() == 3.0);
    const Space d4 = generate_space(parse_generator_spec("discrete:4"), 1);
    CHECK(d4.doubling() == 4.0);
    CHECK(oracle::doubling_constant(d4) == 4.0);
}

TEST_CASE("canonical balls") {
    const Space p = path3();
    REQUIRE(p.balls().size() == 6);
    std::set<std::vector<PointId>> got;
    for (const auto& b : p.balls()) got.insert(b.members);
    CHECK(got == std::set<std::vector<PointId>>{{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 1, 2}});
    CHECK(two_points().balls().size() == 3);
    for (std::size_t n : {2u, 5u, 9u}) {
        const Space d = generate_space(parse_generator_spec("discrete:" + std::to_string(n)), 1);
        CHECK(d.balls().size() == n + 1);
    }
    // every ball's threshold form reproduces its members
    for (const auto& b : p.balls()) {
        double m = 0.0;
        for (PointId y : b.members) {
            CHECK(p.dist(b.center, y) <= b.threshold);
            m += p.mass(y);
        }
        CHECK(m == b.measure);
        CHECK(p.ball_measure(b.center, b.radius()) == b.measure);
    }
}

TEST_CASE("generators") {
    const Space p = generate_space(parse_generator_spec("path:3"), 7);
    CHECK(p.size() == 3);
    CHECK(p.dist(0, 2) == 2.0);
    CHECK(p.mass(1) == 1.0);
    CHECK(generate_space(parse_generator_spec("snowflake-path:3:2"), 7).a0() == 2.0);
    CHECK(generate_space(parse_generator_spec("grid2d:3"), 7).size() == 9);
    CHECK(generate_space(parse_generator_spec("cantor:3"), 7).size() == 8);
    CHECK_THROWS_AS(parse_generator_spec("moebius:3"), ValidationError);
    CHECK_THROWS_AS(parse_generator_spec("path"), ValidationError);
}

TEST_CASE("constants agree with brute force on seeded spaces") {
    for (const char* spec : {"random_planar:16", "snowflake-path:9:0.5", "snowflake-random_planar:10:1.5", "cantor:3",
                             "grid2d:3"}) {
        for (std::uint64_t seed : {1u, 2u}) {
            const Space s = generate_space(parse_generator_spec(spec), seed);
            CHECK_MESSAGE(s.a0() == doctest::Approx(oracle::quasi_metric_constant(s)).epsilon(1e-12), spec);
            CHECK_MESSAGE(s.doubling() == doctest::Approx(oracle::doubling_constant(s)).epsilon(1e-12), spec);
            CHECK_MESSAGE(s.balls().size() == oracle::ball_sets(s).size(), spec);
        }
    }
}

TEST_CASE("generation is deterministic per seed") {
    const auto a = generate_space(parse_generator_spec("random_planar:12"), 5);
    const auto b = generate_space(parse_generator_spec("random_planar:12"), 5);
    const auto c = generate_space(parse_generator_spec("random_planar:12"), 6);
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("relabelling keeps the constants") {
    const Space s = generate_space(parse_generator_spec("random_planar:14"), 3);
    std::vector<PointId> perm{13, 0, 12, 1, 11, 2, 10, 3, 9, 4, 8, 5, 7, 6};
    const Space t = permute_space(s, perm);
    CHECK(t.a0() == s.a0());
    CHECK(t.doubling() == s.doubling());
    CHECK(t.dist(0, 1) == s.dist(13, 0));
    CHECK(t.balls().size() == s.balls().size());
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Space(2, {0, 1, 1, 0}, {1, 0}), ValidationError);
    CHECK_THROWS_AS(Space(2, {0, 1, 2, 0}, {1, 1}), ValidationError);
    CHECK_THROWS_AS(Space(2, {1, 1, 1, 0}, {1, 1}), ValidationError);
    CHECK_THROWS_AS(Space(2, {0, 0, 0, 0}, {1, 1}), ValidationError);
}

TEST_CASE("space file ingestion") {
    const Space p = parse_space_text("# unit path\n3\n0 1 2\n1 0 1\n2 1 0\n1 1 1\n");
    CHECK(p.size() == 3);
    CHECK(p.a0() == 1.0);
    CHECK(parse_space_text(format_space(p)).fingerprint() == p.fingerprint());

    try {
        parse_space_text("2\n0 1\n1 0\n1 0\n");
        FAIL("zero mass accepted");
    } catch (const ValidationError& e) {
        CHECK(e.code() == ValidationCode::nonpositive_mass);
        CHECK(e.line() == 4);
        CHECK(e.column() == 3);
    }
    try {
        parse_space_text("2\n0 1\n1.000001 0\n1 1\n");
        FAIL("asymmetry accepted");
    } catch (const ValidationError& e) {
        CHECK(e.code() == ValidationCode::asymmetric_distance);
        CHECK(e.line() == 3);
    }
    // within 1e-12 relative is tolerated
    CHECK_NOTHROW(parse_space_text("2\n0 1\n1.0000000000001 0\n1 1\n"));
    try {
        parse_space_text("3\n0 1 2\n1 0\n2 1 0\n1 1 1\n");
        FAIL("short row accepted");
    } catch (const ValidationError& e) {
        CHECK(e.code() == ValidationCode::malformed_dimensions);
        CHECK(e.line() == 3);
    }
    try {
        parse_space_text("2\n0 x\n1 0\n1 1\n");
        FAIL("junk accepted");
    } catch (const ValidationError& e) {
        CHECK(e.code() == ValidationCode::parse_error);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_space_text("2\n1 1\n1 0\n1 1\n"), ValidationError);
}

TEST_CASE("function and exponent files") {
    CHECK(parse_function_text("1\n# c\n-2.5\n", 2, false) == std::vector<double>{1.0, -2.5});
    CHECK_THROWS_AS(parse_function_text("1\n-2.5\n", 2, true), ValidationError);
    CHECK_THROWS_AS(parse_function_text("1\n", 2, false), ValidationError);
    const auto p = parse_exponent_text("0.5\ninf\n", 2);
    CHECK(p.is_infinite(1));
    CHECK(p.p_minus() == 0.5);
}
