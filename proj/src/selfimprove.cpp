#include "shtlab/selfimprove.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shtlab/error.hpp"
#include "shtlab/maximal.hpp"
#include "shtlab/weights.hpp"

namespace shtlab {

namespace {

std::string join(std::string_view label, const std::string& rest) {
    return label.empty() ? rest : std::string(label) + ", " + rest;
}

bool all_infinite(const ExponentFunction& p) { return p.omega_inf().size() == p.size(); }

bool all_one(const ExponentFunction& p) {
    return std::all_of(p.values().begin(), p.values().end(), [](double v) { return v == 1.0; });
}

struct Candidate {
    double value = -1.0;
    PointFunction f;
};

void normalize(PointFunction& f) {
    const double top = max_abs(f);
    if (top > 0.0)
        for (double& v : f) v /= top;
}

}  // namespace

const char* to_string(OperatorKind kind) { return kind == OperatorKind::ball ? "M" : "M^D"; }

const char* to_string(EstimateKind kind) {
    return kind == EstimateKind::exact ? "exact" : "empirical_lower_bound";
}

const char* to_string(NormStrategy strategy) {
    switch (strategy) {
        case NormStrategy::exact_linf: return "exact_Linf";
        case NormStrategy::exact_l1_pointmass: return "exact_L1_pointmass";
        case NormStrategy::multistart: return "multistart";
    }
    return "multistart";
}

NormStrategy parse_norm_strategy(const std::string& text) {
    if (text == "exact_Linf" || text == "exact_linf") return NormStrategy::exact_linf;
    if (text == "exact_L1_pointmass" || text == "exact_l1_pointmass") return NormStrategy::exact_l1_pointmass;
    if (text == "multistart") return NormStrategy::multistart;
    throw ValidationError(ValidationCode::invalid_parameter, "unknown norm strategy '" + text + "'");
}

PointFunction apply_operator(const Space& space, const AdjacentGridSystem& system, OperatorKind op,
                             std::span<const double> f) {
    return op == OperatorKind::ball ? ball_maximal(space, f) : dyadic_maximal(system, f);
}

double operator_ratio(const Space& space, const AdjacentGridSystem& system, const Lattice& lattice, OperatorKind op,
                      std::span<const double> f) {
    const double denom = lattice.quasinorm(f);
    if (denom == 0.0) return 0.0;
    return lattice.quasinorm(apply_operator(space, system, op, f)) / denom;
}

NormEstimate estimate_operator_norm(const Space& space, const AdjacentGridSystem& system, const Lattice& lattice,
                                    OperatorKind op, NormStrategy strategy, const MultistartOptions& options) {
    const std::size_t n = space.size();
    if (lattice.size() != n) throw PreconditionError("lattice size differs from the space");
    NormEstimate out;
    if (strategy == NormStrategy::exact_linf) {
        if (!lattice.is_lebesgue() || !all_infinite(lattice.exponent())) {
            throw PreconditionError("exact_Linf needs the lattice L^inf");
        }
        // Averages never exceed the max and constants are fixed points.
        out.value = 1.0;
        out.witness.assign(n, 1.0);
        out.trials = 1;
        return out;
    }
    if (strategy == NormStrategy::exact_l1_pointmass) {
        if (!lattice.is_lebesgue() || !all_one(lattice.exponent())) {
            throw PreconditionError("exact_L1_pointmass needs the lattice L^1");
        }
        // Sublinearity: ||T f||_1 <= sum c_i ||T e_i||_1 for f = sum c_i e_i, so point masses are extremal.
        out.value = -1.0;
        for (PointId i = 0; i < n; ++i) {
            PointFunction e(n, 0.0);
            e[i] = 1.0;
            const double v = lattice.quasinorm(apply_operator(space, system, op, e)) / space.mass(i);
            if (v > out.value) {
                out.value = v;
                out.witness = e;
            }
        }
        out.trials = n;
        return out;
    }

    out.kind = EstimateKind::empirical_lower_bound;
    Candidate best;
    auto consider = [&](PointFunction f) {
        const double v = operator_ratio(space, system, lattice, op, f);
        ++out.trials;
        if (v > best.value) {
            best.value = v;
            best.f = std::move(f);
        }
        return v;
    };
    for (PointId i = 0; i < n; ++i) {
        PointFunction e(n, 0.0);
        e[i] = 1.0;
        consider(std::move(e));
    }
    consider(PointFunction(n, 1.0));
    for (const auto& seed_f : options.extra_seeds) {
        if (seed_f.size() != n) throw PreconditionError("seed function size differs from the space");
        consider(abs_of(seed_f));
    }
    for (std::size_t start = 0; start < options.starts; ++start) {
        Rng rng(Rng::derive(options.seed, start));
        PointFunction f(n);
        for (double& v : f) v = rng.uniform();
        normalize(f);
        double current = consider(f);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t step = 0; step < options.steps; ++step) {
            rng.shuffle(order);
            bool improved = false;
            for (std::size_t i : order) {
                const double old = f[i];
                for (double candidate : {0.0, old / 2.0, old * 2.0, 1.0}) {
                    if (candidate == old) continue;
                    f[i] = candidate;
                    if (max_abs(f) == 0.0) {
                        f[i] = old;
                        continue;
                    }
                    const double v = consider(f);
                    if (v > current) {
                        current = v;
                        improved = true;
                        break;
                    }
                    f[i] = old;
                }
            }
            normalize(f);
            if (!improved) break;
        }
    }
    out.value = best.value;
    out.witness = std::move(best.f);
    return out;
}

std::vector<CheckRecord> holder_chain_check(const Space& space, const Lattice& base, std::span<const double> f,
                                            double r, double s, std::string_view label) {
    if (!(r > 0.0 && r < s)) throw PreconditionError("Hoelder chain needs 0 < r < s");
    const Lattice xs = Lattice::convexified(base, s);
    const Lattice xr = Lattice::convexified(base, r);
    const double lhs = xs.quasinorm(ball_maximal(space, f));
    const double rhs = std::pow(xr.quasinorm(ball_maximal(space, pow_abs(f, s / r))), r / s);
    return {check_le("holder_chain[" + base.describe() + "]", "||Mf||_{X^(s)} <= ||M(|f|^{s/r})||_{X^(r)}^{r/s}", lhs,
                     rhs, slack::solver, join(label, "r=" + format_double(r) + ", s=" + format_double(s)))};
}

double SelfImprovementParams::bound_coeff(double r) const {
    const double base = 2.0 * S * std::pow(4.0, 1.0 / rho) * c_fatou / (epsilon * epsilon);
    return std::pow(base, 1.0 / r);
}

double SelfImprovementParams::bound_coeff_eta(double eta) const {
    const double base = 2.0 * S * std::pow(4.0, 1.0 / rho) * c_fatou / (epsilon * epsilon);
    return pow_1p(base, eta);
}

SelfImprovementParams self_improvement_params(double rho, double c_fatou, double S, double K, double C,
                                              double norm_md, double norm_m, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw PreconditionError("theta must lie in (0, 1]");
    if (!(norm_md > 0.0) || !(norm_m > 0.0)) throw PreconditionError("operator norms must be positive");
    SelfImprovementParams p;
    p.theta = theta;
    p.norm_md = norm_md;
    p.norm_m = norm_m;
    p.S = S;
    p.K = K;
    p.C = C;
    p.rho = rho;
    p.c_fatou = c_fatou;
    p.epsilon = theta * std::pow(2.0, -1.0 / rho) / norm_md;
    p.eta0 = p.epsilon / (2.0 * S * S * K);
    p.r0 = 1.0 / (1.0 + p.eta0);
    p.one_minus_r0 = p.eta0 / (1.0 + p.eta0);
    p.eta_remark = C / (std::pow(2.0, 1.0 / rho + 1.0) * S * S * K * norm_m);
    p.r0_lower_bound = 1.0 / (1.0 + p.eta_remark);
    return p;
}

SelfImprovementParams compute_self_improvement_params(const AdjacentGridSystem& system, const Lattice& lattice,
                                                      const NormEstimate& md, const NormEstimate& m, double theta,
                                                      double safety) {
    if (!(theta > 0.0 && theta < 1.0)) throw PreconditionError("theta must lie in (0, 1)");
    if (!(safety >= 1.0)) throw PreconditionError("safety factor must be at least 1");
    const double used = md.kind == EstimateKind::empirical_lower_bound ? md.value * safety : md.value;
    return self_improvement_params(lattice.rho(), lattice.c_fatou(), system.constants.s_formula,
                                   static_cast<double>(system.num_grids()), system.constants.C, used, m.value,
                                   theta);
}

std::vector<CheckRecord> params_checks(const SelfImprovementParams& p) {
    const double limit = std::pow(2.0, -1.0 / p.rho);
    const double prod = p.epsilon * p.norm_md;
    return {
        check_true("params.eps_admissible", "0 < eps ||M^D||_{X->X} < 2^{-1/rho}", prod > 0.0 && prod < limit,
                   "eps ||M^D|| = " + format_double(prod) + ", 2^{-1/rho} = " + format_double(limit)),
        check_true("params.r0_in_unit_interval", "r0 = 1/(1+eta0) in (0,1)",
                   p.eta0 > 0.0 && std::isfinite(p.eta0) && p.r0 > 0.0,
                   "eta0 = " + format_double(p.eta0) + ", 1 - r0 = " + format_double(p.one_minus_r0)),
        // r0 >= (1+eta_remark)^{-1}  <=>  eta0 <= eta_remark.
        check_le("params.r0_remark_bound", "r0 >= (1 + C/(2^{1/rho+1} S^2 K ||M||))^{-1}, compared as eta0 <= eta_L",
                 p.eta0, p.eta_remark, slack::exact),
    };
}

double eta_from_one_minus_r(double one_minus_r) {
    if (!(one_minus_r > 0.0 && one_minus_r < 1.0)) throw PreconditionError("r must lie in (0, 1)");
    return one_minus_r / (1.0 - one_minus_r);
}

SuiteReport verify_self_improvement(const AdjacentGridSystem& system, const Lattice& base,
                                    const SelfImprovementParams& params, const std::vector<Sample>& samples,
                                    const std::vector<RPoint>& grid, double rdf_tol) {
    if (samples.empty()) throw PreconditionError("self-improvement needs at least one sample");
    for (const auto& pt : grid) {
        if (!(pt.eta > 0.0) || pt.eta > params.eta0 * (1.0 + 1e-12)) {
            throw PreconditionError("r at '" + pt.tag + "' lies outside [r0, 1): eta = " + format_double(pt.eta) +
                                    ", eta0 = " + format_double(params.eta0));
        }
    }
    const double eps = params.epsilon;
    const double S = params.S;
    SuiteReport report("selfimprove");
    for (const auto& pt : grid) {
        const double eta = pt.eta;
        const Lattice xr = Lattice::convexified_below_one(base, eta);
        const std::string at = "@" + pt.tag;
        for (const auto& sample : samples) {
            const std::string w = join(sample.label, "r=1/(1+" + format_double(eta) + ")");
            const PointFunction mdf = dyadic_maximal(system, sample.f);
            PointFunction g(sample.f.size()), mdf_r(sample.f.size());
            for (std::size_t x = 0; x < g.size(); ++x) {
                g[x] = root_1p(std::abs(sample.f[x]), eta);
                mdf_r[x] = root_1p(mdf[x], eta);
            }
            const PointFunction m1p_g = dyadic_maximal_1p(system, g, eta);
            report.absorb(check_pointwise_eq("selfimprove.identity" + at, "(M^D f)^r = M^D_{1+eta}(|f|^r)", mdf_r,
                                             m1p_g, slack::exact, w));

            const RdFResult rdf = rubio_de_francia(system, g, eps, rdf_tol);
            const PointFunction& rg = rdf.function;
            const PointFunction m1p_rg = dyadic_maximal_1p(system, rg, eta);
            report.absorb(check_pointwise_le("selfimprove.monotone" + at, "M^D_{1+eta}(|f|^r) <= M^D_{1+eta}(R |f|^r)",
                                             m1p_g, m1p_rg, slack::truncation, w));

            const double low = *std::min_element(rg.begin(), rg.end());
            if (low > 0.0) {
                report.absorb(check_le("selfimprove.a1_weight" + at, "[R |f|^r]_{A_1^D} <= 1/eps",
                                       a1_dyadic_constant(system, rg), 1.0 / eps + rdf.tail_bound / (eps * low),
                                       slack::truncation, w));
                PointFunction cap(rg.size());
                for (std::size_t x = 0; x < rg.size(); ++x) cap[x] = 2.0 * S / (eps * eps) * rg[x];
                report.absorb(check_pointwise_le("selfimprove.weight_bound" + at,
                                                 "M^D_{1+eta}(R |f|^r) <= (2S/eps^2) R |f|^r", m1p_rg, cap,
                                                 slack::truncation, w));
            }
            report.absorb(check_le("selfimprove.rdf_norm" + at, "||R |f|^r||_X <= 4^{1/rho} C_F || |f|^r ||_X",
                                   base.quasinorm(rg),
                                   std::pow(4.0, 1.0 / params.rho) * params.c_fatou * base.quasinorm(g),
                                   slack::truncation, w));
            report.absorb(check_le("selfimprove.final" + at,
                                   "||M^D f||_{X^(r)} <= (2S 4^{1/rho} C_F/eps^2)^{1/r} ||f||_{X^(r)}",
                                   xr.quasinorm(mdf), params.bound_coeff_eta(eta) * xr.quasinorm(sample.f),
                                   slack::truncation, w));
        }
    }
    return report;
}

std::vector<CheckRecord> bound_only_check(const AdjacentGridSystem& system, const Lattice& base,
                                          const SelfImprovementParams& params, const std::vector<Sample>& samples,
                                          const std::string& tag, double r) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("r must lie in (0, 1)");
    const Lattice xr = Lattice::convexified(base, r);
    const double coeff = params.bound_coeff(r);
    SuiteReport worst;
    for (const auto& sample : samples) {
        worst.absorb(check_le("selfimprove.bound_only@" + tag,
                              "||M^D f||_{X^(r)} <= (2S 4^{1/rho} C_F/eps^2)^{1/r} ||f||_{X^(r)} (r below r0: not claimed)",
                              xr.quasinorm(dyadic_maximal(system, sample.f)), coeff * xr.quasinorm(sample.f),
                              slack::truncation, join(sample.label, "r=" + format_double(r))));
    }
    return worst.records();
}

std::vector<CheckRecord> corollary_translation_check(const Space& space, const AdjacentGridSystem& system,
                                                     const ExponentFunction& p, ModularKind kind, double s,
                                                     std::span<const double> f, std::string_view label) {
    const std::vector<double> mass(space.masses().begin(), space.masses().end());
    const Lattice conv = Lattice::convexified(Lattice::lebesgue(p, kind, mass), s);
    const Lattice direct = Lattice::lebesgue(p.scaled(s), kind, mass);
    const double pm = p.p_minus();
    const double c = std::pow(2.0, std::max(1.0 / (s * pm), 1.0) + (1.0 / s) * std::max(1.0 / pm, 1.0));
    std::vector<CheckRecord> out;
    for (OperatorKind op : {OperatorKind::ball, OperatorKind::dyadic}) {
        const double rc = operator_ratio(space, system, conv, op, f);
        const double rd = operator_ratio(space, system, direct, op, f);
        const std::string tag = std::string("[") + to_string(op) + "]";
        const std::string w = join(label, "s=" + format_double(s));
        if (kind == ModularKind::max) {
            out.push_back(check_eq("translation.max_equal" + tag, "||Tf||/||f|| on L^{sp} = on (L^p)^(s) (max modular)",
                                   rd, rc, slack::solver, w));
        } else {
            out.push_back(check_le("translation.direct_vs_convexified" + tag,
                                   "||Tf||_{sp}/||f||_{sp} <= c(p_-,s) ||Tf||_{(L^p)^(s)}/||f||_{(L^p)^(s)}", rd, c * rc,
                                   slack::solver, w));
            out.push_back(check_le("translation.convexified_vs_direct" + tag,
                                   "||Tf||_{(L^p)^(s)}/||f||_{(L^p)^(s)} <= c(p_-,s) ||Tf||_{sp}/||f||_{sp}", rc, c * rd,
                                   slack::solver, w));
        }
    }
    return out;
}

}  // namespace shtlab
