// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shtlab/cli.hpp"
#include "shtlab/error.hpp"
#include "shtlab/io.hpp"
#include "shtlab/maximal.hpp"
#include "shtlab/selfimprove.hpp"
#include "shtlab/suites.hpp"

using namespace shtlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failures;
    std::printf("[%s] %2d. %s -- %s\n", o.ok ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
}

struct SpaceCase {
    std::string spec;
    std::uint64_t seed;
};

std::vector<SpaceCase> small_spaces() {
    return {{"path:8", 1},          {"path:33", 2},          {"path:64", 3},
            {"discrete:5", 4},      {"discrete:40", 5},      {"random_planar:16", 6},
            {"random_planar:24", 7}, {"random_planar:32", 8}, {"random_planar:48", 9},
            {"random_planar:64", 10}, {"snowflake-path:20:0.5", 11}, {"snowflake-path:12:2", 12},
            {"snowflake-random_planar:24:0.5", 13}, {"snowflake-random_planar:16:1.5", 14}, {"cantor:3", 15},
            {"cantor:4", 16},       {"cantor:5", 17},        {"cantor:6", 18},
            {"grid2d:4", 19},       {"grid2d:6", 20},        {"grid2d:8", 21},
            {"snowflake-grid2d:5:0.5", 22}, {"snowflake-discrete:9:2", 23}, {"random_planar:40", 24},
            {"snowflake-cantor:4:2", 25}};
}

std::vector<SpaceCase> grid_spaces() {
    return {{"path:16", 1},          {"path:64", 2},           {"path:128", 3},
            {"snowflake-path:32:0.5", 4}, {"snowflake-path:20:2", 5}, {"snowflake-path:100:0.75", 6},
            {"discrete:10", 7},      {"discrete:64", 8},       {"discrete:128", 9},
            {"random_planar:16", 10}, {"random_planar:32", 11}, {"random_planar:64", 12},
            {"random_planar:96", 13}, {"random_planar:128", 14}, {"random_planar:128", 15},
            {"snowflake-random_planar:48:0.5", 16}, {"snowflake-random_planar:64:1.5", 17},
            {"snowflake-random_planar:128:0.5", 18}, {"cantor:5", 19}, {"cantor:7", 20},
            {"grid2d:8", 21},        {"grid2d:11", 22},        {"snowflake-grid2d:10:0.5", 23},
            {"random_planar:80", 24}, {"snowflake-discrete:30:2", 25}};
}

Space make(const SpaceCase& c) { return generate_space(parse_generator_spec(c.spec), c.seed); }

AdjacentGridSystem grids_for(const Space& s, std::uint64_t seed) {
    return build_adjacent_system(s, choose_delta(s.a0()), GridBuildOptions{32, Rng::derive(seed, 1)});
}

std::vector<PointFunction> sample_functions(std::size_t n, std::size_t randoms, std::uint64_t seed) {
    std::vector<PointFunction> out;
    for (std::size_t i = 0; i < n; ++i) {
        PointFunction e(n, 0.0);
        e[i] = 1.0;
        out.push_back(std::move(e));
    }
    Rng rng(seed);
    for (std::size_t k = 0; k < randoms; ++k) {
        PointFunction f(n);
        for (double& v : f) v = rng.uniform();
        out.push_back(std::move(f));
    }
    return out;
}

RunConfig config_for(const std::string& space, std::uint64_t seed, ModularKind kind, const std::string& exps,
                     const std::string& suite) {
    RunConfig c;
    c.space = space;
    c.seed = seed;
    c.modular = kind;
    c.exponents = exps;
    c.suite = suite;
    return c;
}

struct SuiteRun {
    std::string label;
    RunResult result;
};

std::vector<SuiteRun> suite_runs(const std::string& suite) {
    struct Cfg {
        std::string space;
        std::uint64_t seed;
        ModularKind kind;
        std::string exps;
    };
    const std::vector<Cfg> cfgs{{"path:3", 7, ModularKind::sum, "2,3,2"},
                                {"path:3", 7, ModularKind::max, "2,3,2"},
                                {"random_planar:12", 3, ModularKind::sum, "1/2,3"},
                                {"snowflake-path:8:0.5", 4, ModularKind::max, "1,2,inf"},
                                {"cantor:3", 5, ModularKind::sum, "3/4,2"}};
    std::vector<SuiteRun> out;
    for (const auto& c : cfgs) {
        out.push_back({c.space + "/" + to_string(c.kind), run_theorem_suite(config_for(c.space, c.seed, c.kind, c.exps, suite))});
    }
    return out;
}

// Every record whose name starts with one of `prefixes` passed, and each prefix occurs.
Outcome rows_pass(const std::vector<SuiteRun>& runs, const std::vector<std::string>& prefixes) {
    std::size_t rows = 0;
    for (const auto& run : runs) {
        for (const auto& prefix : prefixes) {
            bool seen = false;
            for (const auto& r : run.result.report.records()) {
                if (r.name.rfind(prefix, 0) != 0) continue;
                seen = true;
                ++rows;
                if (r.verdict == Verdict::fail) return {false, run.label + ": " + r.name + " failed (" + r.witness + ")"};
            }
            if (!seen) return {false, run.label + ": no '" + prefix + "' rows"};
        }
    }
    return {true, std::to_string(rows) + " aggregated rows over " + std::to_string(runs.size()) + " configurations"};
}

}  // namespace

int main() {
    criterion(1, "maximal operators match brute-force enumeration (25 spaces, n <= 64, < 10 s)", []() -> Outcome {
        const auto t0 = Clock::now();
        double worst = 0.0;
        std::size_t cases = 0;
        for (const auto& c : small_spaces()) {
            const Space s = make(c);
            const auto sys = grids_for(s, c.seed);
            for (const auto& f : sample_functions(std::min<std::size_t>(s.size(), 8), 0, 0)) {
                PointFunction g(s.size(), 0.0);
                std::copy(f.begin(), f.end(), g.begin());
                worst = std::max(worst, oracle::max_rel_diff(ball_maximal(s, g), oracle::ball_maximal(s, g)));
                worst = std::max(worst, oracle::max_rel_diff(dyadic_maximal(sys, g), oracle::dyadic_maximal(sys, g)));
                ++cases;
            }
            Rng rng(c.seed + 100);
            for (int k = 0; k < 4; ++k) {
                PointFunction g(s.size());
                for (double& v : g) v = rng.uniform(-1, 1);
                worst = std::max(worst, oracle::max_rel_diff(ball_maximal(s, g), oracle::ball_maximal(s, g)));
                worst = std::max(worst, oracle::max_rel_diff(dyadic_maximal(sys, g), oracle::dyadic_maximal(sys, g)));
                ++cases;
            }
        }
        const double t = seconds_since(t0);
        return Outcome{worst <= 1e-12 && t < 10.0, std::to_string(cases) + " functions, max rel diff " +
                                                       format_double(worst) + ", " + format_double(std::round(t * 100) / 100) + " s"};
    });

    criterion(2, "hand-traced values: Mf = (1, 1/2, 1/3) and ||M||_{L1} = 2 on the unit path", []() -> Outcome {
        const Space s = generate_space(parse_generator_spec("path:3"), 7);
        const auto sys = grids_for(s, 7);
        const auto m = ball_maximal(s, std::vector<double>{1, 0, 0});
        const double want[3] = {1.0, 0.5, 1.0 / 3};
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(m[i] - want[i]) / want[i]);
        const Lattice l1 = Lattice::lebesgue(ExponentFunction::constant(3, 1.0), ModularKind::sum, {1, 1, 1});
        const double norm = estimate_operator_norm(s, sys, l1, OperatorKind::ball, NormStrategy::exact_l1_pointmass).value;
        worst = std::max(worst, std::abs(norm - 2.0) / 2.0);
        return Outcome{worst <= 1e-12, "Mf = (" + format_double(m[0]) + ", " + format_double(m[1]) + ", " +
                                           format_double(m[2]) + "), ||M||_1 = " + format_double(norm)};
    });

    criterion(3, "grid axioms (i), (ii), (iv), outer containment and (b) (25 spaces, n <= 128, < 60 s)", []() -> Outcome {
        const auto t0 = Clock::now();
        std::size_t cubes = 0, max_k = 0;
        double max_c = 0.0;
        for (const auto& c : grid_spaces()) {
            const Space s = make(c);
            const auto sys = grids_for(s, c.seed);
            const auto rep = verify_grid_axioms(sys, s);  // throws on any violation
            const auto cov = evaluate_ball_coverage(sys, s);
            if (!cov.property_b) return Outcome{false, c.spec + ": property (b) fails"};
            if (!std::isfinite(sys.constants.C)) return Outcome{false, c.spec + ": C not finite"};
            cubes += rep.cubes_checked;
            max_k = std::max(max_k, sys.num_grids());
            max_c = std::max(max_c, sys.constants.C);
        }
        const double t = seconds_since(t0);
        return Outcome{t < 60.0, std::to_string(cubes) + " cubes, K <= " + std::to_string(max_k) + ", C <= " +
                                     format_double(max_c) + ", " + format_double(std::round(t * 100) / 100) + " s"};
    });

    criterion(4, "pointwise M^D f <= C Mf and Mf <= C M^D f (indicators + 100 random f per space)", []() -> Outcome {
        std::size_t functions = 0;
        for (const auto& c : grid_spaces()) {
            const Space s = make(c);
            const auto sys = grids_for(s, c.seed);
            for (const auto& f : sample_functions(s.size(), 100, c.seed + 7)) {
                for (const auto& r : verify_equivalence(s, sys, f)) {
                    if (r.verdict != Verdict::pass) return Outcome{false, c.spec + ": " + r.name + " " + r.witness};
                }
                ++functions;
            }
        }
        return Outcome{true, std::to_string(functions) + " functions over 25 spaces, slack 1e-12"};
    });

    criterion(5, "Luxemburg solver vs classical norms, p in {1/2, 1, 2, 7, inf} (500 cases, < 5 s)", []() -> Outcome {
        const auto t0 = Clock::now();
        Rng rng(5150);
        double worst = 0.0;
        std::size_t cases = 0;
        for (double p : {0.5, 1.0, 2.0, 7.0, std::numeric_limits<double>::infinity()}) {
            for (int i = 0; i < 100; ++i) {
                const std::size_t n = 2 + rng.below(30);
                PointFunction f(n);
                std::vector<double> mass(n);
                for (double& v : f) v = rng.uniform(-5, 5);
                for (double& m : mass) m = rng.uniform(0.1, 3);
                double closed = 0.0;
                if (std::isinf(p)) {
                    closed = max_abs(f);
                } else {
                    CompensatedSum acc;
                    for (std::size_t x = 0; x < n; ++x) acc.add(std::pow(std::abs(f[x]), p) * mass[x]);
                    closed = std::pow(acc.value(), 1.0 / p);
                }
                const ModularKind kind = i % 2 ? ModularKind::max : ModularKind::sum;
                const double got = luxemburg_norm(f, ExponentFunction::constant(n, p), mass, kind);
                worst = std::max(worst, std::abs(got - closed) / closed);
                ++cases;
            }
        }
        const double t = seconds_since(t0);
        return Outcome{worst <= 1e-12 && t < 5.0, std::to_string(cases) + " cases, max rel diff " + format_double(worst) +
                                                      ", " + format_double(std::round(t * 1000) / 1000) + " s"};
    });

    criterion(6, "lattice suite: quasi-triangle, modular (i)-(iii), Aoki-Rolewicz, sandwich, max equality", []() -> Outcome {
        std::vector<SuiteRun> runs = suite_runs("modular");
        const auto norms = suite_runs("norms");
        for (std::size_t i = 0; i < runs.size(); ++i) runs[i].result.report.merge(norms[i].result.report);
        return rows_pass(runs, {"modular.order[sum]", "modular.order[max]", "modular.scaling[sum]",
                                "modular.scaling[max]", "modular.convexity[sum]", "modular.convexity[max]",
                                "luxemburg.", "quasi_triangle[", "aoki_rolewicz[", "norm_equivalence.sandwich_lower",
                                "norm_equivalence.sandwich_upper", "norm_equivalence.max_equality"});
    });

    criterion(7, "Rubio de Francia (a), (c) and [Rh] bound; tol/100 certificate (10 seeds x 3 eps)", []() -> Outcome {
        std::vector<SuiteRun> runs;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            RunConfig c = config_for("random_planar:12", seed, seed % 2 ? ModularKind::sum : ModularKind::max, "2,3",
                                     "rdf");
            runs.push_back({"seed " + std::to_string(seed), run_theorem_suite(c)});
        }
        return rows_pass(runs, {"rdf.a_domination", "rdf.b_boundedness", "rdf.c_a1_constant",
                                "rdf.truncation_certificate"});
    });

    criterion(8, "reverse Hoelder and M^D_{1+eta} w <= 2S[w]^2 w for eta in {eta0, eta0/2, eta0/10}", []() -> Outcome {
        const auto runs = suite_runs("reverse-holder");
        Outcome o = rows_pass(runs, {"reverse_holder", "corollary_pointwise"});
        double capped = 0.0, weights = 0.0;
        for (const auto& run : runs) {
            const CheckRecord* c = run.result.report.find("reverse_holder.eta_capped");
            if (!c) return Outcome{false, run.label + ": no eta_capped row"};
            capped += c->lhs;
            weights += c->rhs;
        }
        o.detail += "; eta base = eta0 for " + format_double(weights - capped) + " of " + format_double(weights) + " weights";
        return o;
    });

    criterion(9, "self-improvement chain at r in {r0, (1+r0)/2, 0.99}; unit-constant identity", []() -> Outcome {
        const auto runs = suite_runs("selfimprove");
        Outcome o = rows_pass(runs, {"selfimprove.identity@r0", "selfimprove.final@r0", "selfimprove.final@mid",
                                     "selfimprove.bound_only@0.99", "params.unit_epsilon", "params.unit_eta0",
                                     "params.unit_r0", "params.unit_remark", "params.r0_in_unit_interval"});
        if (!o.ok) return o;
        for (const auto& run : runs) {
            for (const char* name : {"params.unit_epsilon", "params.unit_eta0", "params.unit_r0", "params.unit_remark"}) {
                const CheckRecord* r = run.result.report.find(name);
                if (r->lhs != r->rhs) return Outcome{false, run.label + ": " + name + " is not exact"};
            }
        }
        return o;
    });

    criterion(10, "Hoelder chain for sampled (f, r, s); closed form 7/6 vs (11/6)^{1/2}", []() -> Outcome {
        const Space s = generate_space(parse_generator_spec("path:3"), 7);
        const Lattice l1 = Lattice::lebesgue(ExponentFunction::constant(3, 1.0), ModularKind::sum, {1, 1, 1});
        const auto rec = holder_chain_check(s, l1, std::vector<double>{1, 0, 0}, 1.0, 2.0)[0];
        const bool closed = std::abs(rec.lhs - 7.0 / 6) <= 1e-12 && std::abs(rec.rhs - std::sqrt(11.0 / 6)) <= 1e-12 &&
                            rec.verdict == Verdict::pass;
        if (!closed) return Outcome{false, "closed form gave " + format_double(rec.lhs) + " vs " + format_double(rec.rhs)};
        Outcome o = rows_pass(suite_runs("selfimprove"), {"holder_chain["});
        o.detail = "7/6 <= " + format_double(rec.rhs) + "; " + o.detail;
        return o;
    });

    criterion(11, "two identical verify --suite all runs give byte-identical CSV", []() -> Outcome {
        const auto base = std::filesystem::temp_directory_path() / "shtlab_acceptance";
        std::filesystem::remove_all(base);
        std::string csv[2];
        for (int i = 0; i < 2; ++i) {
            const std::string dir = (base / std::to_string(i)).string();
            const char* argv[] = {"shtlab", "verify", "--suite", "all", "--space", "path:3", "--seed", "7", "--out-dir",
                                  dir.c_str()};
            std::ostringstream out, err;
            const int code = run_command(10, argv, out, err);
            if (code != 0) return Outcome{false, "verify exited " + std::to_string(code)};
            csv[i] = read_file(dir + "/report.csv");
        }
        return Outcome{csv[0] == csv[1] && !csv[0].empty(), std::to_string(csv[0].size()) + " bytes each"};
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
