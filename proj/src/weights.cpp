#include "shtlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shtlab/error.hpp"
#include "shtlab/maximal.hpp"

namespace shtlab {

namespace {

void require_weight(std::span<const double> w, std::size_t n) {
    if (w.size() != n) throw PreconditionError("weight size differs from the space");
    for (std::size_t x = 0; x < w.size(); ++x) {
        if (!(w[x] > 0.0) || !std::isfinite(w[x])) {
            throw PreconditionError("weight entry " + std::to_string(x) + " must be positive and finite");
        }
    }
}

void require_eta(const AdjacentGridSystem& system, std::span<const double> w, double eta) {
    const double top = max_admissible_eta(system, w);
    if (!(eta > 0.0) || eta > top * (1.0 + 1e-12)) {
        throw PreconditionError("eta = " + format_double(eta) + " is outside the admissible range (0, " +
                                format_double(top) + "]");
    }
}

std::string join(std::string_view label, const std::string& rest) {
    return label.empty() ? rest : std::string(label) + ", " + rest;
}

}  // namespace

double a1_dyadic_constant(const AdjacentGridSystem& system, std::span<const double> w) {
    require_weight(w, system.space_size);
    const PointFunction mw = dyadic_maximal(system, w);
    double out = 1.0;
    for (std::size_t x = 0; x < w.size(); ++x) out = std::max(out, mw[x] / w[x]);
    return out;
}

RdFResult rubio_de_francia(const AdjacentGridSystem& system, std::span<const double> h, double epsilon, double tol,
                           std::size_t min_terms) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("Rubio de Francia needs 0 < eps < 1");
    if (!(tol > 0.0)) throw PreconditionError("Rubio de Francia needs tol > 0");
    if (h.size() != system.space_size) throw PreconditionError("function size differs from the space");
    RdFResult out;
    out.epsilon = epsilon;
    const double top = max_abs(h);
    const double scale = top / (1.0 - epsilon);
    std::size_t n_terms = 0;
    double eps_next = epsilon;  // eps^{N+1}
    if (top > 0.0) {
        while (n_terms < min_terms || eps_next * scale > tol) {
            eps_next *= epsilon;
            if (++n_terms > 100000) throw PreconditionError("Rubio de Francia series needs too many terms");
        }
    } else {
        n_terms = min_terms;
        eps_next = std::pow(epsilon, static_cast<double>(n_terms + 1));
    }
    out.terms_used = n_terms;
    out.tail_bound = eps_next * scale;

    PointFunction term = abs_of(h);
    std::vector<CompensatedSum> acc(h.size());
    double weight = 1.0;
    for (std::size_t k = 0; k <= n_terms; ++k) {
        for (std::size_t x = 0; x < h.size(); ++x) acc[x].add(weight * term[x]);
        if (k < n_terms) {
            term = dyadic_maximal(system, term);
            weight *= epsilon;
        }
    }
    out.function.resize(h.size());
    for (std::size_t x = 0; x < h.size(); ++x) out.function[x] = acc[x].value();
    return out;
}

std::vector<CheckRecord> verify_rdf_properties(const AdjacentGridSystem& system, const Lattice& lattice,
                                               std::span<const double> h, double epsilon, double norm_md,
                                               double tol, std::string_view label) {
    const double limit = std::pow(2.0, -1.0 / lattice.rho());
    if (!(epsilon > 0.0) || !(epsilon * norm_md < limit)) {
        throw PreconditionError("eps ||M^D|| = " + format_double(epsilon * norm_md) + " must lie in (0, 2^{-1/rho}) = (0, " +
                                format_double(limit) + ")");
    }
    const RdFResult rdf = rubio_de_francia(system, h, epsilon, tol);
    const PointFunction& rh = rdf.function;
    const std::string w = join(label, "eps=" + format_double(epsilon));
    std::vector<CheckRecord> out;
    out.push_back(check_pointwise_le("rdf.a_domination", "|h(x)| <= R h(x)", abs_of(h), rh, slack::truncation, w));
    out.push_back(check_le("rdf.b_boundedness", "||R h||_X <= 4^{1/rho} C_F ||h||_X", lattice.quasinorm(rh),
                           std::pow(4.0, 1.0 / lattice.rho()) * lattice.c_fatou() * lattice.quasinorm(h),
                           slack::truncation, w));
    const double low = *std::min_element(rh.begin(), rh.end());
    if (low > 0.0) {
        // The truncated series misses at most tail_bound at each point.
        const double rhs = 1.0 / epsilon + rdf.tail_bound / (epsilon * low);
        out.push_back(check_le("rdf.c_a1_constant", "[R h]_{A_1^D} <= 1/eps", a1_dyadic_constant(system, rh), rhs,
                               slack::truncation, w));
    } else {
        out.push_back(info("rdf.c_a1_constant", "[R h]_{A_1^D} <= 1/eps (R h vanishes somewhere: not a weight)", 0.0,
                           1.0 / epsilon, w));
    }
    return out;
}

double max_admissible_eta(const AdjacentGridSystem& system, std::span<const double> w) {
    const double S = system.constants.s_formula;
    const double K = static_cast<double>(system.num_grids());
    return 1.0 / (2.0 * S * S * K * a1_dyadic_constant(system, w));
}

std::vector<CheckRecord> reverse_holder_check(const AdjacentGridSystem& system, std::span<const double> w,
                                              double eta, std::string_view label) {
    require_weight(w, system.space_size);
    require_eta(system, w, eta);
    const double S = system.constants.s_formula;
    const double a1 = a1_dyadic_constant(system, w);
    SuiteReport worst;
    for (const auto& grid : system.grids) {
        for (const auto& lvl : grid.levels) {
            for (const auto& cube : lvl.cubes) {
                CompensatedSum powered, plain;
                for (PointId y : cube.members) {
                    powered.add(pow_1p(w[y], eta) * system.mass[y]);
                    plain.add(w[y] * system.mass[y]);
                }
                const double lhs = root_1p(powered.value() / (2.0 * cube.measure), eta);
                const double rhs = S * a1 * plain.value() / cube.measure;
                worst.absorb(check_le("reverse_holder", "((2mu(Q))^{-1} int_Q w^{1+eta})^{1/(1+eta)} <= S [w] <w>_Q",
                                      lhs, rhs, slack::solver,
                                      join(label, "eta=" + format_double(eta) + ", grid " + std::to_string(grid.id) +
                                                      " level " + std::to_string(lvl.level) + " cube " +
                                                      std::to_string(cube.index))));
            }
        }
    }
    return worst.records();
}

std::vector<CheckRecord> corollary_pointwise_check(const AdjacentGridSystem& system, std::span<const double> w,
                                                   double eta, std::string_view label) {
    require_weight(w, system.space_size);
    require_eta(system, w, eta);
    const double S = system.constants.s_formula;
    const double a1 = a1_dyadic_constant(system, w);
    PointFunction rhs(w.size());
    for (std::size_t x = 0; x < w.size(); ++x) rhs[x] = 2.0 * S * a1 * a1 * w[x];
    return {check_pointwise_le("corollary_pointwise", "M^D_{1+eta} w(x) <= 2 S [w]^2 w(x)",
                               dyadic_maximal_1p(system, w, eta), rhs, slack::solver,
                               join(label, "eta=" + format_double(eta)))};
}

}  // namespace shtlab
