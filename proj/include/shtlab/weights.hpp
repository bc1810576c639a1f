#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "shtlab/check.hpp"
#include "shtlab/grids.hpp"
#include "shtlab/lattice.hpp"

namespace shtlab {

/// [w]_{A_1^D} = max_x M^D w(x) / w(x). Throws PreconditionError unless every
/// entry is positive and finite.
double a1_dyadic_constant(const AdjacentGridSystem& system, std::span<const double> w);

struct RdFResult {
    PointFunction function;
    double epsilon = 0.0;
    std::size_t terms_used = 0;  // N: the sum runs over k = 0..N
    double tail_bound = 0.0;     // eps^{N+1} max|h| / (1 - eps)
};

/// sum_{k=0}^{N} eps^k (M^D)^k |h| with N the smallest index >= min_terms
/// whose tail bound is <= tol. The tail bound is certified because the max
/// of (M^D)^k h never exceeds max|h|.
RdFResult rubio_de_francia(const AdjacentGridSystem& system, std::span<const double> h, double epsilon, double tol,
                           std::size_t min_terms = 0);

/// Properties (a) |h| <= Rh, (b) ||Rh|| <= 4^{1/rho} C_F ||h|| and (c)
/// [Rh] <= 1/eps. Refuses unless eps * norm_md < 2^{-1/rho}.
std::vector<CheckRecord> verify_rdf_properties(const AdjacentGridSystem& system, const Lattice& lattice,
                                               std::span<const double> h, double epsilon, double norm_md,
                                               double tol, std::string_view label = {});

/// Largest eta for which the reverse Hoelder inequality is claimed: 1/(2 S^2 K [w]).
double max_admissible_eta(const AdjacentGridSystem& system, std::span<const double> w);

/// ((2 mu(Q))^{-1} int_Q w^{1+eta})^{1/(1+eta)} <= S [w] <w>_Q on every cube.
/// Throws PreconditionError for eta outside (0, max_admissible_eta].
std::vector<CheckRecord> reverse_holder_check(const AdjacentGridSystem& system, std::span<const double> w,
                                              double eta, std::string_view label = {});

/// M^D_{1+eta} w <= 2 S [w]^2 w at every point, same eta range.
std::vector<CheckRecord> corollary_pointwise_check(const AdjacentGridSystem& system, std::span<const double> w,
                                                   double eta, std::string_view label = {});

}  // namespace shtlab
