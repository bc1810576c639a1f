#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shtlab/check.hpp"
#include "shtlab/grids.hpp"
#include "shtlab/lattice.hpp"
#include "shtlab/space.hpp"

namespace shtlab {

enum class OperatorKind { ball, dyadic };
enum class EstimateKind { exact, empirical_lower_bound };
enum class NormStrategy { exact_linf, exact_l1_pointmass, multistart };

const char* to_string(OperatorKind kind);
const char* to_string(EstimateKind kind);
const char* to_string(NormStrategy strategy);
NormStrategy parse_norm_strategy(const std::string& text);

struct NormEstimate {
    double value = 0.0;
    EstimateKind kind = EstimateKind::exact;
    PointFunction witness;  // ||T witness|| / ||witness|| == value
    std::size_t trials = 0;
};

struct MultistartOptions {
    std::size_t starts = 6;
    std::size_t steps = 10;
    std::uint64_t seed = 0;
    std::vector<PointFunction> extra_seeds;  // e.g. Rubio de Francia outputs
};

PointFunction apply_operator(const Space& space, const AdjacentGridSystem& system, OperatorKind op,
                             std::span<const double> f);

/// ||T f|| / ||f|| in the lattice (0 for f = 0).
double operator_ratio(const Space& space, const AdjacentGridSystem& system, const Lattice& lattice, OperatorKind op,
                      std::span<const double> f);

/// exact_linf: 1 on L^inf. exact_l1_pointmass: max_i ||T e_i||_1 / mass(i) on
/// L^1. multistart: best ratio over indicators, the constant, extra seeds and
/// coordinate ascent from random starts; a lower bound. Each random start has
/// its own derived stream, so the value never decreases as starts are added.
NormEstimate estimate_operator_norm(const Space& space, const AdjacentGridSystem& system, const Lattice& lattice,
                                    OperatorKind op, NormStrategy strategy, const MultistartOptions& options = {});

/// ||Mf||_{X^(s)} <= ||M(|f|^{s/r})||_{X^(r)}^{r/s}, 0 < r < s.
std::vector<CheckRecord> holder_chain_check(const Space& space, const Lattice& base, std::span<const double> f,
                                            double r, double s, std::string_view label = {});

struct SelfImprovementParams {
    double theta = 0.5;
    double norm_md = 1.0;  // value entering eps, after any safety inflation
    double norm_m = 1.0;
    double epsilon = 0.0;  // theta 2^{-1/rho} / norm_md
    double S = 1.0;
    double K = 1.0;
    double C = 1.0;
    double rho = 1.0;
    double c_fatou = 1.0;
    double eta0 = 0.0;  // eps / (2 S^2 K)
    double r0 = 1.0;    // 1 / (1 + eta0); rounds to 1 when eta0 is tiny
    double one_minus_r0 = 0.0;
    double eta_remark = 0.0;  // C / (2^{1/rho+1} S^2 K ||M||)
    double r0_lower_bound = 1.0;

    /// (2 S 4^{1/rho} C_F / eps^2)^{1/r}
    double bound_coeff(double r) const;
    /// Same at r = 1/(1+eta).
    double bound_coeff_eta(double eta) const;
};

/// The parameter calculus from raw constants. theta may be 1 here, which is
/// the boundary of the admissible eps range.
SelfImprovementParams self_improvement_params(double rho, double c_fatou, double S, double K, double C,
                                              double norm_md, double norm_m, double theta);

/// S = s_formula, K and C from the system; the M^D estimate is inflated by
/// `safety` when it is only an empirical lower bound. Requires 0 < theta < 1.
SelfImprovementParams compute_self_improvement_params(const AdjacentGridSystem& system, const Lattice& lattice,
                                                      const NormEstimate& md, const NormEstimate& m,
                                                      double theta = 0.5, double safety = 1.5);

/// 0 < eps ||M^D|| < 2^{-1/rho}, r0 in (0,1), and the constructive r0 against
/// the lower bound it implies.
std::vector<CheckRecord> params_checks(const SelfImprovementParams& params);

struct Sample {
    std::string label;
    PointFunction f;
};

struct RPoint {
    std::string tag;
    double eta = 0.0;  // r = 1/(1+eta)
};

/// eta with 1/(1+eta) = r, computed from 1 - r.
double eta_from_one_minus_r(double one_minus_r);

/// Replays the proof chain at each (sample, r) and asserts the final bound
/// ||M^D f||_{X^(r)} <= bound_coeff(r) ||f||_{X^(r)}. Every r must lie in
/// [r0, 1), i.e. 0 < eta <= eta0.
SuiteReport verify_self_improvement(const AdjacentGridSystem& system, const Lattice& base,
                                    const SelfImprovementParams& params, const std::vector<Sample>& samples,
                                    const std::vector<RPoint>& grid, double rdf_tol = 1e-14);

/// The final bound alone at an arbitrary r in (0, 1), which may lie below r0
/// where the bound is not claimed.
std::vector<CheckRecord> bound_only_check(const AdjacentGridSystem& system, const Lattice& base,
                                          const SelfImprovementParams& params, const std::vector<Sample>& samples,
                                          const std::string& tag, double r);

/// Operator ratios on L^{sp(.)} against (L^{p(.)})^{(s)}: within the factor
/// c = 2^{max{1/(s p_-),1} + (1/s) max{1/p_-,1}} for the sum modular, equal for
/// the max modular. Runs for M and M^D.
std::vector<CheckRecord> corollary_translation_check(const Space& space, const AdjacentGridSystem& system,
                                                     const ExponentFunction& p, ModularKind kind, double s,
                                                     std::span<const double> f, std::string_view label = {});

}  // namespace shtlab
