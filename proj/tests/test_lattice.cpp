#include <doctest.h>

#include <cmath>
#include <limits>

#include "shtlab/error.hpp"
#include "shtlab/lattice.hpp"

using namespace shtlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const std::vector<double> unit2{1, 1};

bool all_pass(const std::vector<CheckRecord>& recs) {
    return std::all_of(recs.begin(), recs.end(), [](const CheckRecord& r) { return r.verdict != Verdict::fail; });
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("exponent functions") {
    const auto p = parse_exponent_list("1/2,3", 5);
    CHECK(p.size() == 5);
    CHECK(p[0] == 0.5);
    CHECK(p[3] == 3.0);
    CHECK(p.p_minus() == 0.5);
    CHECK_FALSE(p.is_constant());
    const auto q = parse_exponent_list("1,inf", 2);
    CHECK(q.is_infinite(1));
    CHECK(q.omega_inf() == std::vector<std::size_t>{1});
    CHECK(ExponentFunction::constant(3, 2.0).is_constant());
    CHECK_THROWS_AS(ExponentFunction({0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(ExponentFunction({-1.0}), ValidationError);
    CHECK_THROWS_AS(ExponentFunction({701.0}), ValidationError);
    CHECK_NOTHROW(ExponentFunction({700.0, kInf}));
    CHECK_THROWS_AS(parse_exponent_list("2,x", 3), ValidationError);
    CHECK_THROWS(ExponentFunction::constant(2, 400.0).scaled(2.0));
}

TEST_CASE("modular by hand") {
    const auto p2 = ExponentFunction::constant(2, 2.0);
    CHECK(modular(std::vector<double>{0, 0}, p2, unit2, ModularKind::sum) == 0.0);
    CHECK(modular(std::vector<double>{0, 0}, p2, unit2, ModularKind::max) == 0.0);
    CHECK(modular(std::vector<double>{3, 4}, p2, unit2, ModularKind::sum) == 25.0);
    const auto mixed = parse_exponent_list("1,inf", 2);
    CHECK(modular(std::vector<double>{2, 3}, mixed, unit2, ModularKind::sum) == 5.0);
    CHECK(modular(std::vector<double>{2, 3}, mixed, unit2, ModularKind::max) == 3.0);
    CHECK(std::isinf(modular(std::vector<double>{1e300, 0}, ExponentFunction::constant(2, 7.0), unit2, ModularKind::sum)));
}

TEST_CASE("Luxemburg norms by hand") {
    const auto p2 = ExponentFunction::constant(2, 2.0);
    CHECK(luxemburg_norm(std::vector<double>{3, 4}, p2, unit2, ModularKind::sum) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(luxemburg_norm(std::vector<double>{-3, 7}, ExponentFunction::constant(2, kInf), unit2, ModularKind::sum) == 7.0);
    const auto mixed = parse_exponent_list("1,inf", 2);
    CHECK(luxemburg_norm(std::vector<double>{2, 3}, mixed, unit2, ModularKind::sum) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(luxemburg_norm(std::vector<double>{2, 3}, mixed, unit2, ModularKind::max) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(luxemburg_norm(std::vector<double>{0, 0}, mixed, unit2, ModularKind::sum) == 0.0);
}

TEST_CASE("Luxemburg solver against classical norms") {
    Rng rng(2024);
    const std::vector<double> mass{0.5, 1.0, 2.0, 1.5};
    for (double p : {0.5, 1.0, 2.0, 7.0, kInf}) {
        for (int i = 0; i < 40; ++i) {
            std::vector<double> f(4);
            for (double& v : f) v = rng.uniform(-3, 3);
            double closed = 0.0;
            if (std::isinf(p)) {
                for (double v : f) closed = std::max(closed, std::abs(v));
            } else {
                for (int x = 0; x < 4; ++x) closed += std::pow(std::abs(f[x]), p) * mass[x];
                closed = std::pow(closed, 1.0 / p);
            }
            for (ModularKind kind : {ModularKind::sum, ModularKind::max}) {
                CHECK(rel(luxemburg_norm(f, ExponentFunction::constant(4, p), mass, kind), closed) <= 1e-12);
            }
        }
    }
}

TEST_CASE("convexification") {
    const auto l2 = Lattice::lebesgue(ExponentFunction::constant(2, 2.0), ModularKind::sum, unit2);
    const auto c = Lattice::convexified(l2, 2.0);
    CHECK(c.quasinorm(std::vector<double>{3, 4}) == doctest::Approx(std::pow(337.0, 0.25)).epsilon(1e-14));
    CHECK(c.quasinorm(std::vector<double>{0, 0}) == 0.0);
    CHECK(c.describe() == "(L^p(2)/sum)^(2)");
    const auto mixed = Lattice::lebesgue(parse_exponent_list("1/2,3", 2), ModularKind::max, unit2);
    const auto same = Lattice::convexified(mixed, 1.0);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> f{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(same.quasinorm(f) == mixed.quasinorm(f));
    }
    // r = 1/(1+eta) with eta far below machine epsilon
    const auto below = Lattice::convexified_below_one(l2, 1e-20);
    CHECK(below.r() == 1.0);
    CHECK(below.quasinorm(std::vector<double>{3, 4}) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK_THROWS_AS(Lattice::convexified(l2, 0.0), PreconditionError);
}

TEST_CASE("lattice constants") {
    const auto half = Lattice::lebesgue(ExponentFunction::constant(2, 0.5), ModularKind::sum, unit2);
    CHECK(half.c_tri() == 2.0);
    CHECK(half.rho() == 0.5);
    CHECK(half.c_fatou() == 1.0);
    const auto l3 = Lattice::lebesgue(ExponentFunction::constant(2, 3.0), ModularKind::sum, unit2);
    CHECK(l3.c_tri() == 1.0);
    CHECK(l3.rho() == 1.0);
    // c_tri(X^(r)) = 2^{|1 - 1/r|} c_tri(X)^{1/r}
    const auto c = Lattice::convexified(half, 2.0);
    CHECK(c.c_tri() == doctest::Approx(std::pow(2.0, 0.5) * std::pow(2.0, 0.5)));
    CHECK(c.rho() == doctest::Approx(1.0 / (1.0 + std::log2(c.c_tri()))));
}

TEST_CASE("modular properties") {
    const auto p = ExponentFunction::constant(2, 0.5);
    const auto recs = verify_modular_properties(p, unit2, ModularKind::sum, std::vector<double>{1, 1},
                                                std::vector<double>{0.5, 0.5}, 0.25);
    REQUIRE(recs.size() == 3);
    CHECK(recs[1].name == "modular.scaling[sum]");
    CHECK(recs[1].lhs == 1.0);  // m(f/4) = 2 (1/4)^{1/2}
    CHECK(recs[1].rhs == 1.0);  // (1/4)^{1/2} m(f)
    CHECK(all_pass(recs));
    const auto mixed = parse_exponent_list("1/2,3", 4);
    Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> f(4), g(4);
        for (double& v : f) v = rng.uniform(-1, 1);
        for (double& v : g) v = rng.uniform(-1, 1);
        for (ModularKind kind : {ModularKind::sum, ModularKind::max}) {
            CHECK(all_pass(verify_modular_properties(mixed, std::vector<double>(4, 1.0), kind, f, g, 0.5)));
        }
    }
    CHECK(verify_modular_properties(ExponentFunction::constant(2, 2.0), unit2, ModularKind::sum,
                                    std::vector<double>{1, 1}, std::vector<double>{1, 1}, 0.5)
              .size() == 2);
    CHECK_THROWS_AS(verify_modular_properties(p, unit2, ModularKind::sum, std::vector<double>{1, 1},
                                              std::vector<double>{1, 1}, 1.0),
                    PreconditionError);
}

TEST_CASE("quasi-triangle inequality") {
    const auto half = Lattice::lebesgue(ExponentFunction::constant(2, 0.5), ModularKind::sum, unit2);
    // ||e_0 + e_1||_{1/2} = (1 + 1)^2 = 4 = 2 (1 + 1): the constant is sharp
    const auto recs = verify_quasi_triangle(half, std::vector<double>{1, 0}, std::vector<double>{0, 1});
    CHECK(recs[0].lhs == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(recs[0].rhs == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(recs[0].verdict == Verdict::pass);
    CHECK(verify_quasi_triangle(half, std::vector<double>{0.3, 2}, std::vector<double>{0, 0})[0].verdict == Verdict::pass);
    const std::vector<double> m4(4, 1.0);
    Rng rng(17);
    for (ModularKind kind : {ModularKind::sum, ModularKind::max}) {
        const auto base = Lattice::lebesgue(parse_exponent_list("1/2,3,inf,1", 4), kind, m4);
        for (const auto& lat : {base, Lattice::convexified(base, 0.75), Lattice::convexified(base, 3.0)}) {
            for (int i = 0; i < 200; ++i) {
                std::vector<double> f(4), g(4);
                for (double& v : f) v = rng.uniform(-1, 1);
                for (double& v : g) v = rng.uniform(-1, 1);
                CHECK(all_pass(verify_quasi_triangle(lat, f, g)));
            }
        }
    }
}

TEST_CASE("norm equivalences") {
    const auto p2 = ExponentFunction::constant(2, 2.0);
    const auto recs = verify_norm_equivalences(p2, unit2, ModularKind::sum, 2.0, std::vector<double>{3, 4});
    REQUIRE(recs.size() == 2);
    // constants 2^{-1/2} and 2; both quasi-norms equal ||f||_4 for constant p
    CHECK(recs[0].lhs == doctest::Approx(std::pow(2.0, -0.5) * recs[0].rhs).epsilon(1e-14));
    CHECK(recs[1].rhs == doctest::Approx(2.0 * recs[1].lhs).epsilon(1e-14));
    CHECK(all_pass(recs));
    const auto mixed = parse_exponent_list("1/2,3", 2);
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> f{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(all_pass(verify_norm_equivalences(mixed, unit2, ModularKind::sum, 0.5, f)));
        const auto eq = verify_norm_equivalences(mixed, unit2, ModularKind::max, 0.5, f);
        CHECK(eq[0].name == "norm_equivalence.max_equality");
        CHECK(all_pass(eq));
    }
}

TEST_CASE("Aoki-Rolewicz finite sums") {
    const auto half = Lattice::lebesgue(ExponentFunction::constant(2, 0.5), ModularKind::sum, unit2);
    CHECK(all_pass(aoki_rolewicz_check(half, {{0.7, 0.2}})));
    const auto two = aoki_rolewicz_check(half, {{1, 0}, {0, 1}});
    CHECK(two[0].lhs == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(two[0].rhs == doctest::Approx(16.0).epsilon(1e-15));  // 2^2 (1 + 1)^2
    const auto conv = Lattice::convexified(
        Lattice::lebesgue(parse_exponent_list("2,3,1/2", 5), ModularKind::sum, std::vector<double>(5, 1.0)), 0.75);
    Rng rng(21);
    std::vector<PointFunction> parts;
    for (int k = 0; k < 10; ++k) {
        PointFunction f(5);
        for (double& v : f) v = rng.uniform();
        parts.push_back(f);
    }
    CHECK(all_pass(aoki_rolewicz_check(conv, parts)));
    CHECK_THROWS_AS(aoki_rolewicz_check(half, {{-1, 0}}), PreconditionError);
}
