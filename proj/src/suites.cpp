#include "shtlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "shtlab/error.hpp"
#include "shtlab/io.hpp"
#include "shtlab/maximal.hpp"
#include "shtlab/weights.hpp"

namespace shtlab {

namespace {

// Stream ids for Rng::derive(config.seed, id); one per sample family.
enum Stream : std::uint64_t {
    kGridStream = 1,
    kEquivalenceStream,
    kRelabelStream,
    kModularStream,
    kClosedFormStream,
    kTriangleStream,
    kAokiStream,
    kSandwichStream,
    kRdfStream,
    kNormSeedStream,
    kSelfImproveStream,
    kHolderStream,
    kWeightStream,
    kMultistartStream,
    kNormPropertyStream,
};

Space make_space(const RunConfig& c) { return resolve_space(c.space, c.seed); }

AdjacentGridSystem make_system(const RunConfig& c, const Space& s) {
    const double delta = c.delta > 0.0 ? c.delta : choose_delta(s.a0());
    return build_adjacent_system(s, delta, GridBuildOptions{c.kmax_grids, Rng::derive(c.seed, kGridStream)});
}

std::vector<double> mass_of(const Space& s) { return {s.masses().begin(), s.masses().end()}; }

Lattice make_lattice(const RunConfig& c, const ExponentFunction& p, const Space& s) {
    Lattice base = Lattice::lebesgue(p, c.modular, mass_of(s));
    return c.convexify == 1.0 ? base : Lattice::convexified(base, c.convexify);
}

bool all_values(const ExponentFunction& p, double v) {
    return std::all_of(p.values().begin(), p.values().end(), [v](double q) { return q == v; });
}

std::string hex(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

PointFunction random_values(Rng& rng, std::size_t n, double lo, double hi) {
    PointFunction f(n);
    for (double& v : f) v = rng.uniform(lo, hi);
    return f;
}

PointFunction scaled(std::span<const double> f, double c) {
    PointFunction out(f.begin(), f.end());
    for (double& v : out) v *= c;
    return out;
}

std::string s_tag(double s) { return "[s=" + format_double(s) + "]"; }

struct NamedExponent {
    std::string label;
    ExponentFunction p;
};

std::vector<NamedExponent> exponent_family(const RunContext& ctx) {
    const std::size_t n = ctx.space().size();
    return {
        {"p=config", ctx.exponent()},
        {"p=1/2", ExponentFunction::constant(n, 0.5)},
        {"p=(1/2,3)", parse_exponent_list("1/2,3", n)},
        {"p=(1,inf)", parse_exponent_list("1,inf", n)},
        {"p=(3/4,2,inf)", parse_exponent_list("3/4,2,inf", n)},
    };
}

std::vector<Lattice> lattice_family(const RunContext& ctx) {
    const std::size_t n = ctx.space().size();
    const auto mass = mass_of(ctx.space());
    std::vector<Lattice> out;
    for (ModularKind kind : {ModularKind::sum, ModularKind::max}) {
        const Lattice config = Lattice::lebesgue(ctx.exponent(), kind, mass);
        const Lattice mixed = Lattice::lebesgue(parse_exponent_list("1/2,3", n), kind, mass);
        out.push_back(config);
        out.push_back(Lattice::lebesgue(ExponentFunction::constant(n, 0.5), kind, mass));
        out.push_back(mixed);
        out.push_back(Lattice::lebesgue(parse_exponent_list("1,inf", n), kind, mass));
        out.push_back(Lattice::convexified(config, 0.75));
        out.push_back(Lattice::convexified(mixed, 2.0));
    }
    if (!ctx.lattice().is_lebesgue()) out.push_back(ctx.lattice());
    return out;
}

std::vector<double> s_sweep(const RunConfig& c) {
    std::vector<double> out;
    for (std::size_t j = 1; j <= c.s_points; ++j) {
        out.push_back(1.0 + (c.s0 - 1.0) * static_cast<double>(j) / static_cast<double>(c.s_points));
    }
    return out;
}

}  // namespace

RunContext::RunContext(RunConfig config)
    : config_(std::move(config)),
      space_(make_space(config_)),
      system_(make_system(config_, space_)),
      p_(resolve_exponents(config_.exponents, space_.size())),
      lattice_(make_lattice(config_, p_, space_)) {}

std::vector<Sample> RunContext::indicators() const {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < space_.size(); ++i) {
        PointFunction e(space_.size(), 0.0);
        e[i] = 1.0;
        out.push_back({"e_" + std::to_string(i), std::move(e)});
    }
    return out;
}

std::vector<Sample> RunContext::random_functions(std::size_t count, std::uint64_t stream) const {
    Rng rng(Rng::derive(config_.seed, stream));
    std::vector<Sample> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back({"random_" + std::to_string(i), random_values(rng, space_.size(), 0.0, 1.0)});
    }
    return out;
}

std::vector<Sample> RunContext::rdf_weights(std::size_t count, double epsilon) const {
    std::vector<Sample> out;
    for (auto& h : random_functions(count, kWeightStream)) {
        out.push_back({"rdf_" + h.label.substr(7), rubio_de_francia(system_, h.f, epsilon, config_.rdf_tol).function});
    }
    return out;
}

const NormEstimate& RunContext::norm_md() {
    if (!norm_md_) {
        const ExponentFunction* p = lattice_.is_lebesgue() ? &lattice_.exponent() : nullptr;
        NormStrategy strategy = NormStrategy::multistart;
        if (p && all_values(*p, std::numeric_limits<double>::infinity())) strategy = NormStrategy::exact_linf;
        if (p && all_values(*p, 1.0)) strategy = NormStrategy::exact_l1_pointmass;
        MultistartOptions opt{config_.norm_starts, config_.norm_steps, Rng::derive(config_.seed, kMultistartStream), {}};
        for (auto& w : rdf_weights(3, 0.25)) opt.extra_seeds.push_back(std::move(w.f));
        norm_md_ = estimate_operator_norm(space_, system_, lattice_, OperatorKind::dyadic, strategy, opt);
        MultistartOptions opt_m = opt;
        opt_m.seed = Rng::derive(config_.seed, kMultistartStream + 100);
        norm_m_ = estimate_operator_norm(space_, system_, lattice_, OperatorKind::ball, strategy, opt_m);
    }
    return *norm_md_;
}

const NormEstimate& RunContext::norm_m() {
    norm_md();
    return *norm_m_;
}

const SelfImprovementParams& RunContext::params() {
    if (!params_) {
        params_ = compute_self_improvement_params(system_, lattice_, norm_md(), norm_m(), config_.theta,
                                                  config_.safety);
    }
    return *params_;
}

void run_axioms(RunContext& ctx, RunResult& out) {
    SuiteReport& r = out.report;
    const Space& s = ctx.space();
    const AdjacentGridSystem& sys = ctx.system();
    const GridConstants& k = sys.constants;
    try {
        const GridAxiomReport rep = verify_grid_axioms(sys, s);
        r.add(check_true("grids.axioms", "partition (i), nesting (ii), parent/child (iv), Q in B(z, 4 A0^2 delta^k)", true,
                         std::to_string(rep.cubes_checked) + " cubes in " + std::to_string(sys.num_grids()) + " grids"));
        r.add(check_true("grids.top_level_single", "top level is one cube per grid", rep.top_levels_single));
    } catch (const AxiomViolation& e) {
        r.add(check_true("grids.axioms", "partition (i), nesting (ii), parent/child (iv), Q in B(z, 4 A0^2 delta^k)", false,
                         e.what()));
    }
    const BallCoverage cov = evaluate_ball_coverage(sys, s);
    r.add(check_true("grids.property_b", "every canonical ball lies in a cube of its scale in some grid", cov.property_b,
                     cov.property_b ? "" : "B(" + std::to_string(cov.witness_center) + ", " + format_double(cov.witness_radius) + ")"));
    r.add(check_true("grids.ball_cube_constant_finite", "mu(Q_B) <= C mu(B) and mu(B(z, C1 delta^k)) <= C mu(Q), C finite",
                     std::isfinite(k.C) && k.C >= 1.0, "C=" + format_double(k.C)));
    const double regime = 96.0 * std::pow(s.a0(), 6) * sys.delta;
    if (sys.in_regime) {
        r.add(check_le("grids.delta_regime", "96 A0^6 delta <= 1", regime, 1.0, slack::exact));
    } else {
        r.add(info("grids.delta_regime", "96 A0^6 delta <= 1 fails for the overridden delta: out-of-regime", regime, 1.0));
    }
    r.add(check_true("grids.gdp_complete", "every cube of level >= k_min+2 has a generalized dyadic parent",
                     sys.gdp_complete));
    if (sys.gdp_complete) {
        r.add(check_le("grids.s_measured_le_formula", "max mu(Q*)/mu(Q') <= A (A0/delta^3)^{log2 A}", k.s_measured,
                       k.s_formula, slack::exact));
        r.add(check_le("grids.s_measured_ge_one", "1 <= max mu(Q*)/mu(Q')", 1.0, k.s_measured, slack::exact));
    }
    r.add(info("grids.c1_measured", "largest c with B(z, c delta^k) in Q, against (12 A0^4)^{-1}", k.c1_measured,
               k.c1_formula));
    r.add(info("grids.K", "number of adjacent grids built", static_cast<double>(k.K)));
    r.add(info("grids.C_ball_to_cube", "max over balls of min mu(Q_B)/mu(B)", k.ball_to_cube));
    r.add(info("grids.C_cube_to_ball", "max over cubes of mu(B(z, 4 A0^2 delta^k))/mu(Q)", k.cube_to_ball));
    r.add(info("space.A0", "quasi-metric constant", s.a0()));
    r.add(info("space.A", "doubling constant", s.doubling()));
    r.add(info("space.A1", s.homogeneity_bound_holds() ? "greedy geometric doubling count, <= A^{3 log2 A0 + 5}"
                                                       : "greedy geometric doubling count EXCEEDS A^{3 log2 A0 + 5} (warning)",
               static_cast<double>(s.geometric_doubling()), s.homogeneity_bound()));

    Rng rng(Rng::derive(ctx.config().seed, kRelabelStream));
    std::vector<PointId> perm(s.size());
    for (PointId i = 0; i < s.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    const Space relabelled = permute_space(s, perm);
    r.add(check_eq("space.a0_relabel", "A0 invariant under relabelling", relabelled.a0(), s.a0(), slack::exact));
    r.add(check_eq("space.doubling_relabel", "A invariant under relabelling", relabelled.doubling(), s.doubling(),
                   slack::exact));
}

void run_equivalence(RunContext& ctx, RunResult& out) {
    SuiteReport& r = out.report;
    const Space& s = ctx.space();
    const AdjacentGridSystem& sys = ctx.system();
    const std::size_t n = s.size();
    auto samples = ctx.indicators();
    const auto randoms = ctx.random_functions(ctx.config().random_samples, kEquivalenceStream);
    samples.insert(samples.end(), randoms.begin(), randoms.end());
    Rng rng(Rng::derive(ctx.config().seed, kEquivalenceStream + 100));

    for (const auto& sample : samples) {
        const auto& f = sample.f;
        r.absorb(verify_equivalence(s, sys, f, sample.label));
        const PointFunction m = ball_maximal(s, f);
        const PointFunction md = dyadic_maximal(sys, f);
        const double top = max_abs(f);
        r.absorb(check_le("maximal.max_bound.ball", "max Mf <= max|f|", max_abs(m), top, 0.0, sample.label));
        r.absorb(check_le("maximal.max_bound.dyadic", "max M^D f <= max|f|", max_abs(md), top, 0.0, sample.label));
        r.absorb(check_pointwise_le("maximal.dominates.ball", "|f(x)| <= Mf(x)", abs_of(f), m, 0.0, sample.label));
        r.absorb(check_pointwise_le("maximal.dominates.dyadic", "|f(x)| <= M^D f(x)", abs_of(f), md, 0.0, sample.label));
        const double c = 2.5;
        r.absorb(check_pointwise_eq("maximal.homogeneity.ball", "M(c f) = c Mf, c >= 0", ball_maximal(s, scaled(f, c)),
                                    scaled(m, c), slack::exact, sample.label));
        r.absorb(check_pointwise_eq("maximal.homogeneity.dyadic", "M^D(c f) = c M^D f, c >= 0",
                                    dyadic_maximal(sys, scaled(f, c)), scaled(md, c), slack::exact, sample.label));
        PointFunction g(f);
        for (double& v : g) v *= rng.uniform();
        r.absorb(check_pointwise_le("maximal.monotone.ball", "|g| <= |f| => Mg <= Mf", ball_maximal(s, g), m,
                                    slack::exact, sample.label));
        r.absorb(check_pointwise_le("maximal.monotone.dyadic", "|g| <= |f| => M^D g <= M^D f", dyadic_maximal(sys, g),
                                    md, slack::exact, sample.label));
    }
    const PointFunction constant(n, 1.7);
    r.add(check_pointwise_eq("maximal.constant.ball", "M c = c", ball_maximal(s, constant), constant, 0.0));
    r.add(check_pointwise_eq("maximal.constant.dyadic", "M^D c = c", dyadic_maximal(sys, constant), constant, 0.0));

    for (std::size_t i = 0; i < randoms.size(); ++i) {
        const auto& f = randoms[i].f;
        std::vector<PointFunction> parts;
        for (std::size_t x = 0; x < n; ++x) {
            PointFunction part(n, 0.0);
            part[x] = f[x];
            parts.push_back(std::move(part));
        }
        r.absorb(verify_subadditivity(s, sys, parts, randoms[i].label + " split into point masses"));
        r.absorb(verify_subadditivity(s, sys, {f, randoms[(i + 1) % randoms.size()].f},
                                      randoms[i].label + " + next"));
        r.absorb(verify_r_monotonicity(s, sys, f, 1.0, 2.0, randoms[i].label + ", r=1, s=2"));
        r.absorb(verify_r_monotonicity(s, sys, f, 0.5, 4.0, randoms[i].label + ", r=0.5, s=4"));
    }
    r.add(info("equivalence.C", "comparison constant C used on both sides", sys.constants.C));
}

void run_modular(RunContext& ctx, RunResult& out) {
    SuiteReport& r = out.report;
    const Space& s = ctx.space();
    const std::size_t n = s.size();
    const auto mass = mass_of(s);
    Rng rng(Rng::derive(ctx.config().seed, kModularStream));
    const std::size_t count = std::max<std::size_t>(1, std::min<std::size_t>(ctx.config().random_samples, 50));
    for (const auto& ex : exponent_family(ctx)) {
        for (ModularKind kind : {ModularKind::sum, ModularKind::max}) {
            const Lattice lat = Lattice::lebesgue(ex.p, kind, mass);
            for (std::size_t i = 0; i < count; ++i) {
                const PointFunction f = random_values(rng, n, -1.0, 1.0);
                const PointFunction g = random_values(rng, n, -1.0, 1.0);
                const double alpha = rng.uniform(0.05, 0.95);
                const std::string label = ex.label + ", sample " + std::to_string(i);
                r.absorb(verify_modular_properties(ex.p, mass, kind, f, g, alpha, label));
                const double norm = lat.quasinorm(f);
                const std::string tag = std::string("[") + to_string(kind) + "]";
                r.absorb(check_le("luxemburg.unit_ball" + tag, "m(f/||f||) <= 1", modular(scaled(f, 1.0 / norm), ex.p, mass, kind),
                                  1.0, slack::solver, label));
                r.absorb(check_eq("luxemburg.homogeneity" + tag, "||a f|| = |a| ||f||", lat.quasinorm(scaled(f, -3.25)),
                                  3.25 * norm, slack::exact, label));
            }
        }
    }

    Rng cf(Rng::derive(ctx.config().seed, kClosedFormStream));
    for (double p : {0.5, 1.0, 2.0, 7.0, std::numeric_limits<double>::infinity()}) {
        const ExponentFunction pe = ExponentFunction::constant(n, p);
        const std::string name = "luxemburg.closed_form[p=" + format_double(p) + "]";
        for (ModularKind kind : {ModularKind::sum, ModularKind::max}) {
            for (std::size_t i = 0; i < 20; ++i) {
                const PointFunction f = random_values(cf, n, -2.0, 2.0);
                double closed = 0.0;
                if (std::isinf(p)) {
                    closed = max_abs(f);
                } else {
                    CompensatedSum acc;
                    for (std::size_t x = 0; x < n; ++x) acc.add(std::pow(std::abs(f[x]), p) * mass[x]);
                    closed = std::pow(acc.value(), 1.0 / p);
                }
                r.absorb(check_eq(name, "||f||_p = (sum |f|^p mass)^{1/p}", luxemburg_norm(f, pe, mass, kind), closed,
                                  slack::exact, std::string(to_string(kind)) + ", sample " + std::to_string(i)));
            }
        }
    }
}

void run_norms(RunContext& ctx, RunResult& out) {
    SuiteReport& r = out.report;
    const Space& s = ctx.space();
    const std::size_t n = s.size();
    const auto mass = mass_of(s);
    const auto& cfg = ctx.config();
    const auto lattices = lattice_family(ctx);

    Rng tri(Rng::derive(cfg.seed, kTriangleStream));
    const std::size_t pairs = std::max<std::size_t>(1, 2 * cfg.random_samples);
    for (const auto& lat : lattices) {
        for (std::size_t i = 0; i < pairs; ++i) {
            const PointFunction f = random_values(tri, n, -1.0, 1.0);
            const PointFunction g = random_values(tri, n, -1.0, 1.0);
            r.absorb(verify_quasi_triangle(lat, f, g, "pair " + std::to_string(i)));
        }
        // Disjointly supported indicators are where C_tri can be sharp.
        PointFunction a(n, 0.0), b(n, 0.0);
        a[0] = 1.0;
        b[n - 1] = 1.0;
        r.absorb(verify_quasi_triangle(lat, a, b, "disjoint indicators"));
        r.add(info("lattice.constants[" + lat.describe() + "]", "C_tri (lhs), rho (rhs), C_F = " + format_double(lat.c_fatou()),
                   lat.c_tri(), lat.rho()));
    }

    Rng ao(Rng::derive(cfg.seed, kAokiStream));
    for (const auto& lat : lattices) {
        for (std::size_t list = 0; list < 20; ++list) {
            std::vector<PointFunction> parts;
            for (int k = 0; k < 10; ++k) parts.push_back(random_values(ao, n, 0.0, 1.0));
            r.absorb(aoki_rolewicz_check(lat, parts, "list " + std::to_string(list)));
        }
        std::vector<PointFunction> points;
        for (std::size_t x = 0; x < n; ++x) {
            PointFunction e(n, 0.0);
            e[x] = 1.0;
            points.push_back(std::move(e));
        }
        r.absorb(aoki_rolewicz_check(lat, points, "point indicators"));
    }

    Rng sw(Rng::derive(cfg.seed, kSandwichStream));
    const std::size_t count = std::max<std::size_t>(1, std::min<std::size_t>(cfg.random_samples, 50));
    for (const auto& ex : exponent_family(ctx)) {
        for (ModularKind kind : {ModularKind::sum, ModularKind::max}) {
            for (double sv : {0.5, 2.0, 3.0}) {
                for (std::size_t i = 0; i < count; ++i) {
                    r.absorb(verify_norm_equivalences(ex.p, mass, kind, sv, random_values(sw, n, -1.0, 1.0),
                                                      ex.label + ", sample " + std::to_string(i)));
                }
            }
        }
    }

    Rng np(Rng::derive(cfg.seed, kNormPropertyStream));
    for (const auto& lat : lattices) {
        const std::string tag = "[" + lat.describe() + "]";
        const Lattice twice = Lattice::convexified(Lattice::convexified(lat, 0.75), 2.0);
        const Lattice once = Lattice::convexified(lat, 1.5);
        for (std::size_t i = 0; i < 20; ++i) {
            const PointFunction f = random_values(np, n, -1.0, 1.0);
            const std::string label = "sample " + std::to_string(i);
            r.absorb(check_eq("convexification.composition" + tag, "||f||_{(X^(r))^(s)} = ||f||_{X^(rs)}",
                              twice.quasinorm(f), once.quasinorm(f), slack::solver, label));
            PointFunction g(f);
            for (double& v : g) v *= np.uniform();
            r.absorb(check_le("lattice.order" + tag, "|g| <= |f| => ||g|| <= ||f||", lat.quasinorm(g), lat.quasinorm(f),
                              slack::solver, label));
            // Fatou: the truncations min(|f|, t_k) increase to |f|.
            const double top = max_abs(f);
            double sup = 0.0;
            for (int k = 1; k <= 8; ++k) {
                PointFunction t = abs_of(f);
                for (double& v : t) v = std::min(v, top * k / 8.0);
                sup = std::max(sup, lat.quasinorm(t));
            }
            r.absorb(check_le("lattice.fatou" + tag, "||f|| <= C_F sup ||f_n||, f_n increasing to |f|", lat.quasinorm(f),
                              lat.c_fatou() * sup, slack::solver, label));
        }
        for (double rr : {1.0, 1.5, 2.0, 4.0}) {
            r.absorb(check_le("convexification.c_tri" + tag, "C_tri(X^(r)) <= 2 C_tri(X), r >= 1",
                              Lattice::convexified(lat, rr).c_tri(), 2.0 * lat.c_tri(), slack::exact,
                              "r=" + format_double(rr)));
        }
    }
}

void run_rdf(RunContext& ctx, RunResult& out) {
    SuiteReport& r = out.report;
    const auto& cfg = ctx.config();
    const AdjacentGridSystem& sys = ctx.system();
    const Lattice& lat = ctx.lattice();
    const NormEstimate& md = ctx.norm_md();
    const double used = md.kind == EstimateKind::empirical_lower_bound ? md.value * cfg.safety : md.value;
    const double S = sys.constants.s_formula;
    const double K = static_cast<double>(sys.num_grids());
    const std::size_t n = ctx.space().size();

    auto hs = ctx.random_functions(std::max<std::size_t>(cfg.rdf_samples, 1), kRdfStream);
    PointFunction e0(n, 0.0);
    e0[0] = 1.0;
    hs.push_back({"e_0", e0});
    hs.push_back({"constant", PointFunction(n, 1.0)});
    Rng rng(Rng::derive(cfg.seed, kRdfStream + 100));

    bool certificate = true;
    std::string changed;
    for (double theta : {0.25, 0.5, 0.75}) {
        const double eps = theta * std::pow(2.0, -1.0 / lat.rho()) / used;
        for (const auto& h : hs) {
            const auto coarse = verify_rdf_properties(sys, lat, h.f, eps, used, cfg.rdf_tol, h.label);
            const auto fine = verify_rdf_properties(sys, lat, h.f, eps, used, cfg.rdf_tol / 100.0, h.label);
            for (std::size_t i = 0; i < coarse.size(); ++i) {
                if (coarse[i].verdict != fine[i].verdict) {
                    certificate = false;
                    changed = coarse[i].name + " (" + coarse[i].witness + ")";
                }
            }
            r.absorb(coarse);

            const RdFResult rh = rubio_de_francia(sys, h.f, eps, cfg.rdf_tol);
            const std::string w = h.label + ", eps=" + format_double(eps);
            r.absorb(check_eq("rdf.a1_scale_invariance", "[c w]_{A_1^D} = [w]_{A_1^D}",
                              a1_dyadic_constant(sys, scaled(rh.function, 3.0)), a1_dyadic_constant(sys, rh.function),
                              slack::exact, w));
            PointFunction lower(h.f);
            for (double& v : lower) v *= rng.uniform();
            r.absorb(check_pointwise_le("rdf.monotone", "|h1| <= |h2| => R h1 <= R h2",
                                        rubio_de_francia(sys, lower, eps, cfg.rdf_tol).function, rh.function,
                                        slack::truncation, w));
            r.absorb(check_le("rdf.eta0_admissible", "eps/(2 S^2 K) <= 1/(2 S^2 K [R h])", eps / (2.0 * S * S * K),
                              max_admissible_eta(sys, rh.function), slack::truncation, w));
            r.absorb(check_le("rdf.tail_bound", "eps^{N+1} max|h|/(1-eps) <= tol", rh.tail_bound, cfg.rdf_tol, 0.0, w));
        }
    }
    r.add(check_true("rdf.truncation_certificate", "rerun at tol/100 changes no verdict", certificate, changed));
    const RdFResult one = rubio_de_francia(sys, PointFunction(n, 1.0), 0.5, cfg.rdf_tol);
    r.add(check_pointwise_eq("rdf.constant_fixed_point", "R_{1/2} 1 = 2", one.function, PointFunction(n, 2.0),
                             slack::truncation));
    r.add(info("rdf.norm_md_used", "||M^D||_X value entering eps (estimate x safety when empirical)", used, md.value));
}

void run_reverse_holder(RunContext& ctx, RunResult& out) {
    SuiteReport& r = out.report;
    const auto& cfg = ctx.config();
    const AdjacentGridSystem& sys = ctx.system();
    const SelfImprovementParams& params = ctx.params();
    const std::size_t n = ctx.space().size();

    std::vector<Sample> weights{{"constant", PointFunction(n, 1.0)}};
    PointFunction one_two(n);
    for (std::size_t x = 0; x < n; ++x) one_two[x] = 1.0 + static_cast<double>(x % 2);
    weights.push_back({"one_two", one_two});
    for (auto& w : ctx.rdf_weights(std::min<std::size_t>(cfg.rdf_samples, 10), params.epsilon)) {
        weights.push_back(std::move(w));
    }
    std::size_t capped = 0;
    for (const auto& w : weights) {
        std::vector<double> etas;
        if (cfg.eta) {
            etas = {*cfg.eta};
        } else {
            const double top = max_admissible_eta(sys, w.f);
            if (top < params.eta0) ++capped;
            const double base = std::min(params.eta0, top);
            etas = {base, base / 2.0, base / 10.0};
        }
        for (double eta : etas) {
            r.absorb(reverse_holder_check(sys, w.f, eta, w.label));
            r.absorb(corollary_pointwise_check(sys, w.f, eta, w.label));
        }
    }
    r.add(info("reverse_holder.eta0", "eta0 = eps/(2 S^2 K) with S = A (A0/delta^3)^{log2 A}", params.eta0, params.S));
    // weights whose admissible range ends below eta0 are swept from their own cap
    r.add(info("reverse_holder.eta_capped", "weights with 1/(2 S^2 K [w]) < eta0 (lhs) out of (rhs)",
               static_cast<double>(capped), static_cast<double>(weights.size())));
}

void run_selfimprove(RunContext& ctx, RunResult& out) {
    SuiteReport& r = out.report;
    const auto& cfg = ctx.config();
    const Space& s = ctx.space();
    const AdjacentGridSystem& sys = ctx.system();
    const Lattice& lat = ctx.lattice();
    const std::size_t n = s.size();
    const auto mass = mass_of(s);
    const NormEstimate& md = ctx.norm_md();
    const NormEstimate& m = ctx.norm_m();
    const SelfImprovementParams& p = ctx.params();

    r.add(info("norm_est.M^D", std::string("||M^D||_X, ") + to_string(md.kind), md.value, static_cast<double>(md.trials)));
    r.add(info("norm_est.M", std::string("||M||_X, ") + to_string(m.kind), m.value, static_cast<double>(m.trials)));
    r.add(info("params.epsilon", "eps = theta 2^{-1/rho}/||M^D|| (lhs), ||M^D|| used (rhs)", p.epsilon, p.norm_md));
    r.add(info("params.eta0", "eta0 = eps/(2 S^2 K) (lhs), S (rhs)", p.eta0, p.S));
    r.add(info("params.r0", "r0 = 1/(1+eta0) (lhs), 1 - r0 (rhs)", p.r0, p.one_minus_r0));
    r.add(info("params.r0_lower_bound", "(1 + C/(2^{1/rho+1} S^2 K ||M||))^{-1} (lhs), 1 - bound (rhs)", p.r0_lower_bound,
               p.eta_remark / (1.0 + p.eta_remark)));
    r.absorb(params_checks(p));

    const SelfImprovementParams unit = self_improvement_params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
    r.add(check_eq("params.unit_epsilon", "unit constants, theta = 1: eps = 1/2", unit.epsilon, 0.5, 0.0));
    r.add(check_eq("params.unit_eta0", "unit constants, theta = 1: eta0 = 1/4", unit.eta0, 0.25, 0.0));
    r.add(check_eq("params.unit_r0", "unit constants, theta = 1: r0 = 4/5", unit.r0, 0.8, 0.0));
    r.add(check_eq("params.unit_remark", "unit constants: lower bound (1 + 1/4)^{-1} = r0", unit.r0_lower_bound, unit.r0,
                   0.0));
    const SelfImprovementParams half = self_improvement_params(p.rho, p.c_fatou, p.S, p.K, p.C, p.norm_md, p.norm_m,
                                                               p.theta / 2.0);
    r.add(check_eq("params.theta_halves_eps", "theta/2 halves eps", 2.0 * half.epsilon, p.epsilon, slack::exact));
    r.add(check_eq("params.theta_halves_eta0", "theta/2 halves eta0 (raising r0)", 2.0 * half.eta0, p.eta0, slack::exact));

    // Norm-estimation strategies against each other.
    {
        const Lattice l2 = Lattice::lebesgue(ExponentFunction::constant(n, 2.0), ModularKind::sum, mass);
        const Lattice l1 = Lattice::lebesgue(ExponentFunction::constant(n, 1.0), ModularKind::sum, mass);
        const Lattice linf =
            Lattice::lebesgue(ExponentFunction::constant(n, std::numeric_limits<double>::infinity()), ModularKind::sum, mass);
        const MultistartOptions few{2, cfg.norm_steps, Rng::derive(cfg.seed, kNormSeedStream), {}};
        MultistartOptions more = few;
        more.starts = 4;
        const double seed_max = [&] {
            double best = 0.0;
            for (const auto& e : ctx.indicators()) best = std::max(best, operator_ratio(s, sys, l2, OperatorKind::ball, e.f));
            return best;
        }();
        const NormEstimate ms2 = estimate_operator_norm(s, sys, l2, OperatorKind::ball, NormStrategy::multistart, few);
        const NormEstimate ms4 = estimate_operator_norm(s, sys, l2, OperatorKind::ball, NormStrategy::multistart, more);
        const NormEstimate again = estimate_operator_norm(s, sys, l2, OperatorKind::ball, NormStrategy::multistart, few);
        r.add(check_le("norm_est.multistart_ge_pointmass", "max_i ||M e_i||_2/||e_i||_2 <= multistart estimate on L^2",
                       seed_max, ms2.value, 0.0));
        r.add(check_le("norm_est.best_so_far", "estimate with 2 starts <= estimate with 4 starts", ms2.value, ms4.value, 0.0));
        r.add(check_eq("norm_est.reproducible", "same seed, same estimate", again.value, ms2.value, 0.0));
        r.add(check_eq("norm_est.witness", "||M w||/||w|| = estimate for the witness w",
                       operator_ratio(s, sys, l2, OperatorKind::ball, ms4.witness), ms4.value, slack::truncation));
        const NormEstimate l1_exact = estimate_operator_norm(s, sys, l1, OperatorKind::ball, NormStrategy::exact_l1_pointmass);
        const NormEstimate l1_ms = estimate_operator_norm(s, sys, l1, OperatorKind::ball, NormStrategy::multistart, few);
        r.add(check_le("norm_est.l1_lower_le_exact", "multistart on L^1 <= max_i ||M e_i||_1/mass(i)", l1_ms.value,
                       l1_exact.value, slack::solver));
        const NormEstimate inf_exact = estimate_operator_norm(s, sys, linf, OperatorKind::ball, NormStrategy::exact_linf);
        const NormEstimate inf_ms = estimate_operator_norm(s, sys, linf, OperatorKind::ball, NormStrategy::multistart, few);
        r.add(check_eq("norm_est.linf_exact", "||M||_{L^inf} = 1, attained", inf_ms.value, inf_exact.value, slack::solver));
    }

    // The self-improvement chain at r0 and (1+r0)/2; r = 0.99 joins when it is not below r0.
    auto samples = ctx.indicators();
    for (auto& f : ctx.random_functions(cfg.random_samples, kSelfImproveStream)) samples.push_back(std::move(f));
    for (auto& w : ctx.rdf_weights(cfg.rdf_samples, p.epsilon)) samples.push_back(std::move(w));
    std::vector<RPoint> grid{{"r0", p.eta0}, {"mid", eta_from_one_minus_r(p.one_minus_r0 / 2.0)}};
    const double eta_99 = eta_from_one_minus_r(1.0 - 0.99);
    const bool r99_in_range = eta_99 <= p.eta0;
    if (r99_in_range) grid.push_back({"0.99", eta_99});
    r.merge(verify_self_improvement(sys, lat, p, samples, grid, cfg.rdf_tol));
    if (!r99_in_range) r.absorb(bound_only_check(sys, lat, p, samples, "0.99", 0.99));

    PlotTable sweep{"r_sweep", {"r", "one_minus_r", "bound_coeff"}, {}};
    sweep.rows.push_back({p.r0, p.one_minus_r0, p.bound_coeff_eta(p.eta0)});
    sweep.rows.push_back({1.0 - p.one_minus_r0 / 2.0, p.one_minus_r0 / 2.0, p.bound_coeff_eta(grid[1].eta)});
    sweep.rows.push_back({0.99, 1.0 - 0.99, p.bound_coeff(0.99)});
    out.plots.push_back(std::move(sweep));

    // Hoelder chain, per function, across lattices.
    const std::vector<Lattice> bases{lat, Lattice::lebesgue(parse_exponent_list("1/2,3", n), ModularKind::sum, mass),
                                     Lattice::lebesgue(ExponentFunction::constant(n, 1.0), ModularKind::sum, mass)};
    std::vector<std::pair<double, double>> rs{{1.0, 2.0}, {0.5, 1.0}, {0.75, 1.5}};
    for (double sv : s_sweep(cfg)) rs.emplace_back(1.0, sv);
    auto holder_samples = ctx.indicators();
    for (auto& f : ctx.random_functions(std::min<std::size_t>(cfg.random_samples, 100), kHolderStream)) {
        holder_samples.push_back(std::move(f));
    }
    for (const auto& base : bases) {
        for (const auto& [rr, ss] : rs) {
            for (const auto& f : holder_samples) r.absorb(holder_chain_check(s, base, f.f, rr, ss, f.label));
        }
    }

    // Operator-level statements with empirical norms are logged only.
    PlotTable decay{"decay", {"s", "norm_estimate", "s_minus_1_times_estimate"}, {}};
    for (std::size_t k = 0; k < cfg.s_points; ++k) {
        const double sv = 1.0 + (cfg.s0 - 1.0) / std::pow(2.0, static_cast<double>(k));
        const Lattice xs = Lattice::convexified(lat, sv);
        const MultistartOptions opt{cfg.norm_starts, cfg.norm_steps, Rng::derive(cfg.seed, kMultistartStream + 200 + k), {}};
        const NormEstimate est = estimate_operator_norm(s, sys, xs, OperatorKind::ball, NormStrategy::multistart, opt);
        r.add(info("decay" + s_tag(sv), "(s-1) ||M||_{X^(s)} (lhs), ||M||_{X^(s)} estimate (rhs)", (sv - 1.0) * est.value,
                   est.value));
        r.add(info("holder_chain.operator" + s_tag(sv), "||M||_{X^(s)} (lhs) vs ||M||_X^{1/s} (rhs), lower-bound estimates",
                   est.value, std::pow(m.value, 1.0 / sv)));
        decay.rows.push_back({sv, est.value, (sv - 1.0) * est.value});
    }
    out.plots.push_back(std::move(decay));
    r.add(info("decay.limit_hypothesis", "lim_{s->1+} (s-1)||M||_{X^(s)}: tabulated only, never asserted", 0.0));

    // Translation between (L^p)^(s) and L^{sp} for the operator ratios.
    const std::size_t tcount = std::min<std::size_t>(samples.size(), n + 20);
    for (double sv : s_sweep(cfg)) {
        for (std::size_t i = 0; i < tcount; ++i) {
            r.absorb(corollary_translation_check(s, sys, ctx.exponent(), cfg.modular, sv, samples[i].f, samples[i].label));
        }
    }
}

RunResult run_theorem_suite(const RunConfig& config) {
    validate_config(config);
    RunContext ctx(config);
    RunResult out{SuiteReport(config.suite), {}};
    const std::string& suite = config.suite;
    const bool all = suite == "all";
    if (all || suite == "axioms") run_axioms(ctx, out);
    if (all || suite == "equivalence") run_equivalence(ctx, out);
    if (all || suite == "modular") run_modular(ctx, out);
    if (all || suite == "norms") run_norms(ctx, out);
    if (all || suite == "rdf") run_rdf(ctx, out);
    if (all || suite == "reverse-holder") run_reverse_holder(ctx, out);
    if (all || suite == "selfimprove") run_selfimprove(ctx, out);

    SuiteReport& r = out.report;
    const auto& k = ctx.system().constants;
    r.provenance("library", kLibraryVersion);
    r.provenance("config_hash", hex(config.hash()));
    r.provenance("seed", std::to_string(config.seed));
    r.provenance("suite", suite);
    r.provenance("space", ctx.space().describe());
    r.provenance("system", ctx.system().describe());
    r.provenance("lattice", ctx.lattice().describe());
    r.provenance("A0", format_double(ctx.space().a0()));
    r.provenance("A", format_double(ctx.space().doubling()));
    r.provenance("C", format_double(k.C));
    r.provenance("K", std::to_string(k.K));
    r.provenance("S_formula", format_double(k.s_formula));
    r.provenance("S_measured", format_double(k.s_measured));
    return out;
}

}  // namespace shtlab
