#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "shtlab/check.hpp"
#include "shtlab/grids.hpp"
#include "shtlab/space.hpp"

namespace shtlab {

/// (M_r f)(x) = max over canonical balls B containing x of the r-average of |f|
/// over B. Exact enumeration; r = 1 is the Hardy-Littlewood operator.
PointFunction ball_maximal(const Space& space, std::span<const double> f, double r = 1.0);

/// Same with the supremum over every cube of every grid in the system.
PointFunction dyadic_maximal(const AdjacentGridSystem& system, std::span<const double> f, double r = 1.0);

/// M^D_{1+eta} f, exact for eta below machine epsilon.
PointFunction dyadic_maximal_1p(const AdjacentGridSystem& system, std::span<const double> f, double eta);

/// M^D f <= C Mf and Mf <= C M^D f pointwise, C = system.constants.C.
std::vector<CheckRecord> verify_equivalence(const Space& space, const AdjacentGridSystem& system,
                                            std::span<const double> f, std::string_view label = {});

/// M(sum f_k) <= sum M f_k pointwise, for M and M^D.
std::vector<CheckRecord> verify_subadditivity(const Space& space, const AdjacentGridSystem& system,
                                              const std::vector<PointFunction>& parts, std::string_view label = {});

/// M_r f <= M_s f pointwise, for M and M^D. Requires 0 < r < s.
std::vector<CheckRecord> verify_r_monotonicity(const Space& space, const AdjacentGridSystem& system,
                                               std::span<const double> f, double r, double s,
                                               std::string_view label = {});

}  // namespace shtlab
