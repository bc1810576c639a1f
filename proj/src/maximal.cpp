#include "shtlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shtlab/error.hpp"

namespace shtlab {

namespace {

// Average of g over `members`, clamped into [min g, max g] so that rounding
// never lifts an average above the largest value it averages.
double average(std::span<const PointId> members, std::span<const double> g, std::span<const double> mass,
               double measure) {
    CompensatedSum acc;
    double lo = g[members.front()];
    double hi = lo;
    for (PointId y : members) {
        acc.add(g[y] * mass[y]);
        lo = std::min(lo, g[y]);
        hi = std::max(hi, g[y]);
    }
    return std::clamp(acc.value() / measure, lo, hi);
}

void require_finite(std::span<const double> f, std::size_t n) {
    if (f.size() != n) {
        throw PreconditionError("function has " + std::to_string(f.size()) + " values but the space has " +
                                std::to_string(n) + " points");
    }
    for (double v : f) {
        if (!std::isfinite(v)) throw PreconditionError("function values must be finite");
    }
}

void require_order(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("maximal operator order r must be positive");
}

PointFunction dyadic_sup(const AdjacentGridSystem& system, std::span<const double> g) {
    PointFunction out(system.space_size, 0.0);
    for (const auto& grid : system.grids) {
        for (const auto& lvl : grid.levels) {
            for (const auto& cube : lvl.cubes) {
                const double a = average(cube.members, g, system.mass, cube.measure);
                for (PointId y : cube.members) out[y] = std::max(out[y], a);
            }
        }
    }
    return out;
}

}  // namespace

PointFunction ball_maximal(const Space& space, std::span<const double> f, double r) {
    require_order(r);
    require_finite(f, space.size());
    const PointFunction g = pow_abs(f, r);
    const auto& balls = space.balls();
    std::vector<double> avg(balls.size());
    for (std::size_t b = 0; b < balls.size(); ++b) {
        avg[b] = average(balls[b].members, g, space.masses(), balls[b].measure);
    }
    PointFunction out(space.size(), 0.0);
    for (PointId x = 0; x < space.size(); ++x) {
        for (std::uint32_t b : space.balls_containing(x)) out[x] = std::max(out[x], avg[b]);
        if (r != 1.0) out[x] = std::pow(out[x], 1.0 / r);
    }
    return out;
}

PointFunction dyadic_maximal(const AdjacentGridSystem& system, std::span<const double> f, double r) {
    require_order(r);
    require_finite(f, system.space_size);
    PointFunction out = dyadic_sup(system, pow_abs(f, r));
    if (r != 1.0) {
        for (double& v : out) v = std::pow(v, 1.0 / r);
    }
    return out;
}

PointFunction dyadic_maximal_1p(const AdjacentGridSystem& system, std::span<const double> f, double eta) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw PreconditionError("eta must be nonnegative");
    require_finite(f, system.space_size);
    PointFunction g(f.size());
    std::transform(f.begin(), f.end(), g.begin(), [eta](double v) { return pow_1p(std::abs(v), eta); });
    PointFunction out = dyadic_sup(system, g);
    for (double& v : out) v = root_1p(v, eta);
    return out;
}

std::vector<CheckRecord> verify_equivalence(const Space& space, const AdjacentGridSystem& system,
                                            std::span<const double> f, std::string_view label) {
    if (system.space_fingerprint != space.fingerprint()) {
        throw PreconditionError("grid system was built over a different space");
    }
    const double C = system.constants.C;
    const PointFunction m = ball_maximal(space, f);
    const PointFunction md = dyadic_maximal(system, f);
    PointFunction cm(m.size()), cmd(md.size());
    std::transform(m.begin(), m.end(), cm.begin(), [C](double v) { return C * v; });
    std::transform(md.begin(), md.end(), cmd.begin(), [C](double v) { return C * v; });
    return {
        check_pointwise_le("equivalence.dyadic_le_ball", "M^D f(x) <= C Mf(x)", md, cm, slack::exact, label),
        check_pointwise_le("equivalence.ball_le_dyadic", "Mf(x) <= C M^D f(x)", m, cmd, slack::exact, label),
    };
}

std::vector<CheckRecord> verify_subadditivity(const Space& space, const AdjacentGridSystem& system,
                                              const std::vector<PointFunction>& parts, std::string_view label) {
    if (parts.empty()) throw PreconditionError("subadditivity needs at least one function");
    const std::size_t n = space.size();
    PointFunction total(n, 0.0), sum_m(n, 0.0), sum_md(n, 0.0);
    std::vector<CompensatedSum> t(n), a(n), b(n);
    for (const auto& f : parts) {
        const PointFunction m = ball_maximal(space, f);
        const PointFunction md = dyadic_maximal(system, f);
        for (std::size_t x = 0; x < n; ++x) {
            t[x].add(std::abs(f[x]));
            a[x].add(m[x]);
            b[x].add(md[x]);
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        total[x] = t[x].value();
        sum_m[x] = a[x].value();
        sum_md[x] = b[x].value();
    }
    return {
        check_pointwise_le("subadditivity.ball", "M(sum f_k)(x) <= sum M f_k(x)", ball_maximal(space, total), sum_m,
                           slack::exact, label),
        check_pointwise_le("subadditivity.dyadic", "M^D(sum f_k)(x) <= sum M^D f_k(x)",
                           dyadic_maximal(system, total), sum_md, slack::exact, label),
    };
}

std::vector<CheckRecord> verify_r_monotonicity(const Space& space, const AdjacentGridSystem& system,
                                               std::span<const double> f, double r, double s,
                                               std::string_view label) {
    if (!(r > 0.0 && r < s)) throw PreconditionError("r-monotonicity needs 0 < r < s");
    return {
        check_pointwise_le("r_monotonicity.ball", "M_r f(x) <= M_s f(x), r < s", ball_maximal(space, f, r),
                           ball_maximal(space, f, s), slack::exact, label),
        check_pointwise_le("r_monotonicity.dyadic", "M^D_r f(x) <= M^D_s f(x), r < s", dyadic_maximal(system, f, r),
                           dyadic_maximal(system, f, s), slack::exact, label),
    };
}

}  // namespace shtlab
