#include "shtlab/grids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "shtlab/error.hpp"

namespace shtlab {

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

double side(double delta, int k) { return std::pow(delta, k); }

int top_level(double delta, double diameter) {
    // Largest k with delta^k > diameter.
    int k = 0;
    if (side(delta, 0) > diameter) {
        while (side(delta, k + 1) > diameter) ++k;
    } else {
        while (side(delta, k) <= diameter) --k;
    }
    return k;
}

int bottom_level(double delta, double min_separation, int from) {
    // Smallest k with delta^k <= min separation: every point is its own net point.
    int k = from;
    while (side(delta, k) > min_separation) ++k;
    return k;
}

std::string cube_name(std::uint32_t grid, int level, std::uint32_t index) {
    return "grid " + std::to_string(grid) + ", level " + std::to_string(level) + ", cube " + std::to_string(index);
}

DyadicGrid build_grid(const Space& space, double delta, int k_min, int k_max, std::uint32_t id,
                      std::uint64_t seed) {
    const std::size_t n = space.size();
    const std::size_t levels = static_cast<std::size_t>(k_max - k_min + 1);
    const double outer = 4.0 * space.a0() * space.a0();
    Rng rng(seed);

    std::vector<std::vector<char>> in_net(levels, std::vector<char>(n, 0));
    for (std::size_t j = 0; j < levels; ++j) {
        const double s = side(delta, k_min + static_cast<int>(j));
        if (j > 0) in_net[j] = in_net[j - 1];
        std::vector<PointId> centers;
        for (PointId x = 0; x < n; ++x)
            if (in_net[j][x]) centers.push_back(x);
        std::vector<PointId> order(n);
        std::iota(order.begin(), order.end(), PointId{0});
        rng.shuffle(order);
        for (PointId x : order) {
            if (in_net[j][x]) continue;
            const bool separated = std::all_of(centers.begin(), centers.end(),
                                               [&](PointId c) { return space.dist(x, c) >= s; });
            if (separated) {
                in_net[j][x] = 1;
                centers.push_back(x);
            }
        }
    }
    std::fill(in_net[levels - 1].begin(), in_net[levels - 1].end(), 1);

    // anc[j][x]: centre of the level-j cube containing x.
    std::vector<std::vector<PointId>> anc(levels, std::vector<PointId>(n));
    for (;;) {
        std::vector<std::vector<PointId>> parent(levels, std::vector<PointId>(n));
        for (std::size_t j = 1; j < levels; ++j) {
            std::vector<PointId> coarse;
            for (PointId c = 0; c < n; ++c)
                if (in_net[j - 1][c]) coarse.push_back(c);
            for (PointId z = 0; z < n; ++z) {
                if (!in_net[j][z]) continue;
                if (in_net[j - 1][z]) {
                    parent[j][z] = z;
                    continue;
                }
                PointId best = coarse.front();
                for (PointId c : coarse) {
                    if (space.dist(z, c) < space.dist(z, best)) best = c;
                }
                parent[j][z] = best;
            }
        }
        std::iota(anc[levels - 1].begin(), anc[levels - 1].end(), PointId{0});
        for (std::size_t j = levels - 1; j-- > 0;) {
            for (PointId x = 0; x < n; ++x) anc[j][x] = parent[j + 1][anc[j + 1][x]];
        }
        bool augmented = false;
        for (std::size_t j = 0; j < levels; ++j) {
            const double limit = outer * side(delta, k_min + static_cast<int>(j));
            for (PointId x = 0; x < n; ++x) {
                if (space.dist(anc[j][x], x) < limit) continue;
                for (std::size_t i = j; i < levels; ++i) in_net[i][x] = 1;
                augmented = true;
            }
        }
        if (!augmented) break;
    }

    DyadicGrid grid;
    grid.id = id;
    grid.seed = seed;
    grid.levels.resize(levels);
    for (std::size_t j = 0; j < levels; ++j) {
        GridLevel& lvl = grid.levels[j];
        lvl.level = k_min + static_cast<int>(j);
        lvl.sidelength = side(delta, lvl.level);
        lvl.cube_of.assign(n, kNoParent);
        std::vector<PointId> center_of_cube;
        for (PointId x = 0; x < n; ++x) {
            const PointId z = anc[j][x];
            std::uint32_t idx = kNoParent;
            for (std::uint32_t c = 0; c < center_of_cube.size(); ++c)
                if (center_of_cube[c] == z) idx = c;
            if (idx == kNoParent) {
                idx = static_cast<std::uint32_t>(center_of_cube.size());
                center_of_cube.push_back(z);
                DyadicCube cube;
                cube.grid = id;
                cube.level = lvl.level;
                cube.index = idx;
                cube.center = z;
                cube.sidelength = lvl.sidelength;
                lvl.cubes.push_back(std::move(cube));
            }
            lvl.cubes[idx].members.push_back(x);
            lvl.cube_of[x] = idx;
        }
        // Points are visited in id order, so cube indices already follow smallest member id.
        for (auto& cube : lvl.cubes) {
            CompensatedSum acc;
            for (PointId y : cube.members) acc.add(space.mass(y));
            cube.measure = acc.value();
        }
        if (j > 0) {
            GridLevel& up = grid.levels[j - 1];
            for (auto& cube : lvl.cubes) {
                const std::uint32_t p = up.cube_of[cube.center];
                cube.parent = p;
                up.cubes[p].children.push_back(cube.index);
            }
        }
    }
    return grid;
}

std::size_t required_level_index(const AdjacentGridSystem& system, double radius) {
    // HK (b): delta^(k+1) < r <= delta^k requires a cube at level k-1.
    for (int k = system.k_min - 1; k <= system.k_max; ++k) {
        if (side(system.delta, k + 1) < radius && radius <= side(system.delta, k)) {
            const int need = std::clamp(k - 1, system.k_min, system.k_max);
            return static_cast<std::size_t>(need - system.k_min);
        }
    }
    if (radius > side(system.delta, system.k_min - 1)) return 0;
    return system.num_levels() - 1;
}

bool all_gdps_exist(const AdjacentGridSystem& system) {
    for (std::uint32_t g = 0; g < system.num_grids(); ++g) {
        for (int k = system.k_min + 2; k <= system.k_max; ++k) {
            const auto& lvl = system.level(g, k);
            for (std::uint32_t c = 0; c < lvl.cubes.size(); ++c) {
                try {
                    (void)generalized_dyadic_parent(system, CubeRef{g, k, c});
                } catch (const GdpMissing&) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

std::string AdjacentGridSystem::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "delta=" << delta << " levels=[" << k_min << "," << k_max << "] K=" << grids.size()
       << (in_regime ? "" : " out-of-regime");
    return os.str();
}

double choose_delta(double a0) {
    if (!(a0 >= 1.0) || !std::isfinite(a0)) {
        throw PreconditionError("choose_delta needs a finite a0 >= 1");
    }
    const double bound = 96.0 * std::pow(a0, 6);
    double delta = 1.0;
    while (bound * delta > 1.0) delta /= 2.0;
    return delta;
}

bool delta_in_regime(double a0, double delta) {
    return 96.0 * std::pow(a0, 6) * delta <= 1.0 + 1e-12;
}

AdjacentGridSystem build_adjacent_system(const Space& space, double delta, const GridBuildOptions& options) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw PreconditionError("delta must lie in (0, 1)");
    }
    if (options.k_max_grids == 0) {
        throw PreconditionError("k_max_grids must be at least 1");
    }
    AdjacentGridSystem system;
    system.delta = delta;
    system.in_regime = delta_in_regime(space.a0(), delta);
    const int k_top = top_level(delta, space.diameter());
    system.k_min = k_top - 2;
    system.k_max = bottom_level(delta, space.min_separation(), k_top);
    system.space_size = space.size();
    system.space_fingerprint = space.fingerprint();
    system.a0 = space.a0();
    system.a_dbl = space.doubling();
    system.mass.assign(space.masses().begin(), space.masses().end());

    BallCoverage coverage;
    for (std::size_t t = 0; t < options.k_max_grids; ++t) {
        const auto id = static_cast<std::uint32_t>(t + 1);
        system.grids.push_back(
            build_grid(space, delta, system.k_min, system.k_max, id, Rng::derive(options.seed, t)));
        coverage = evaluate_ball_coverage(system, space);
        if (!coverage.property_b) continue;
        system.gdp_complete = all_gdps_exist(system);
        if (system.gdp_complete) break;
    }
    if (!coverage.property_b) {
        std::ostringstream os;
        os.precision(17);
        os << "insufficient adjacency: after " << options.k_max_grids << " grids the ball B("
           << coverage.witness_center << ", " << coverage.witness_radius << ") fits no cube of the required level";
        throw InsufficientAdjacency(os.str(), coverage.witness_center, coverage.witness_radius);
    }

    GridConstants& c = system.constants;
    c.K = system.grids.size();
    c.C1_formula = 4.0 * space.a0() * space.a0();
    c.c1_formula = 1.0 / (12.0 * std::pow(space.a0(), 4));
    c.ball_to_cube = coverage.ball_to_cube;
    c.cube_to_ball = 1.0;
    for (const auto& grid : system.grids) {
        for (const auto& lvl : grid.levels) {
            for (const auto& cube : lvl.cubes) {
                const double ball = space.ball_measure(cube.center, c.C1_formula * cube.sidelength);
                c.cube_to_ball = std::max(c.cube_to_ball, ball / cube.measure);
            }
        }
    }
    c.C = std::max(c.ball_to_cube, c.cube_to_ball);
    c.c1_measured = verify_grid_axioms(system, space).c1_measured;
    c.s_formula = s_formula(space.doubling(), space.a0(), delta);
    c.s_measured = system.gdp_complete ? compute_S(space, system).s_measured
                                       : std::numeric_limits<double>::quiet_NaN();
    return system;
}

GridAxiomReport verify_grid_axioms(const AdjacentGridSystem& system, const Space& space) {
    if (system.space_size != space.size() || system.space_fingerprint != space.fingerprint()) {
        throw PreconditionError("grid system was built over a different space");
    }
    GridAxiomReport report;
    report.C1 = 4.0 * space.a0() * space.a0();
    report.c1_formula = 1.0 / (12.0 * std::pow(space.a0(), 4));
    report.c1_measured = std::numeric_limits<double>::infinity();
    const std::size_t n = space.size();
    const std::size_t levels = system.num_levels();

    for (const auto& grid : system.grids) {
        if (grid.levels.size() != levels) {
            throw AxiomViolation("grid " + std::to_string(grid.id) + " has the wrong number of levels");
        }
        report.top_levels_single = report.top_levels_single && grid.levels.front().cubes.size() == 1;
        for (std::size_t j = 0; j < levels; ++j) {
            const GridLevel& lvl = grid.levels[j];
            const int k = system.k_min + static_cast<int>(j);
            if (lvl.level != k || lvl.cube_of.size() != n) {
                throw AxiomViolation("grid " + std::to_string(grid.id) + " level " + std::to_string(k) +
                                     " is malformed");
            }
            // (i): every point in exactly one cube.
            std::size_t covered = 0;
            for (const auto& cube : lvl.cubes) {
                const std::string name = cube_name(grid.id, k, cube.index);
                if (cube.members.empty()) throw AxiomViolation(name + " is empty");
                if (!std::binary_search(cube.members.begin(), cube.members.end(), cube.center)) {
                    throw AxiomViolation(name + " does not contain its centre");
                }
                for (PointId y : cube.members) {
                    if (y >= n || lvl.cube_of[y] != cube.index) {
                        throw AxiomViolation(name + " overlaps another cube of its level (point " +
                                             std::to_string(y) + ")");
                    }
                }
                covered += cube.members.size();
                // (iii) outer containment.
                const double limit = report.C1 * cube.sidelength;
                for (PointId y : cube.members) {
                    if (!(space.dist(cube.center, y) < limit)) {
                        throw AxiomViolation(name + " leaves its containing ball B(z, 4 A0^2 delta^k) at point " +
                                             std::to_string(y));
                    }
                }
                // Inner ball: largest c with B(z, c delta^k) inside Q.
                double nearest_outside = std::numeric_limits<double>::infinity();
                std::size_t next = 0;
                for (PointId y = 0; y < n; ++y) {
                    if (next < cube.members.size() && cube.members[next] == y) {
                        ++next;
                        continue;
                    }
                    nearest_outside = std::min(nearest_outside, space.dist(cube.center, y));
                }
                report.c1_measured = std::min(report.c1_measured, nearest_outside / cube.sidelength);
                // (iv) parent and children.
                if (j == 0) {
                    if (cube.parent) throw AxiomViolation(name + " is at the top level but has a parent");
                } else {
                    const GridLevel& up = grid.levels[j - 1];
                    if (!cube.parent || *cube.parent >= up.cubes.size()) {
                        throw AxiomViolation(name + " has no valid parent");
                    }
                    for (PointId y : cube.members) {
                        if (up.cube_of[y] != *cube.parent) {
                            throw AxiomViolation(name + " is not contained in its parent");
                        }
                    }
                    const auto& siblings = up.cubes[*cube.parent].children;
                    if (std::find(siblings.begin(), siblings.end(), cube.index) == siblings.end()) {
                        throw AxiomViolation(name + " is missing from its parent's children");
                    }
                }
                if (j + 1 < levels) {
                    const GridLevel& down = grid.levels[j + 1];
                    if (cube.children.empty()) throw AxiomViolation(name + " has no child");
                    std::size_t child_points = 0;
                    for (std::uint32_t ch : cube.children) {
                        if (ch >= down.cubes.size() || down.cubes[ch].parent != cube.index) {
                            throw AxiomViolation(name + " lists a child that does not point back");
                        }
                        child_points += down.cubes[ch].members.size();
                    }
                    if (child_points != cube.members.size()) {
                        throw AxiomViolation(name + " is not the disjoint union of its children");
                    }
                } else if (!cube.children.empty()) {
                    throw AxiomViolation(name + " is at the bottom level but has children");
                }
            }
            if (covered != n) {
                throw AxiomViolation("grid " + std::to_string(grid.id) + " level " + std::to_string(k) +
                                     " does not partition the points");
            }
            report.cubes_checked += lvl.cubes.size();
        }
        // (ii): any two cubes nest or are disjoint.
        for (std::size_t j = 1; j < levels; ++j) {
            for (const auto& cube : grid.levels[j].cubes) {
                for (std::size_t i = 0; i < j; ++i) {
                    const auto& coarse = grid.levels[i].cube_of;
                    const std::uint32_t first = coarse[cube.members.front()];
                    for (PointId y : cube.members) {
                        if (coarse[y] != first) {
                            throw AxiomViolation(cube_name(grid.id, cube.level, cube.index) +
                                                 " straddles two cubes of level " +
                                                 std::to_string(system.k_min + static_cast<int>(i)));
                        }
                    }
                }
            }
        }
    }
    return report;
}

BallCoverage evaluate_ball_coverage(const AdjacentGridSystem& system, const Space& space) {
    BallCoverage out;
    out.ball_to_cube = 1.0;
    const std::size_t grids = system.num_grids();
    const std::size_t levels = system.num_levels();
    std::vector<std::size_t> finest(grids);
    for (PointId x = 0; x < space.size(); ++x) {
        const auto order = space.by_distance(x);
        std::fill(finest.begin(), finest.end(), levels - 1);
        std::size_t count = 0;
        for (double t : space.thresholds_from(x)) {
            while (count < order.size() && space.dist(x, order[count]) <= t) {
                const PointId y = order[count++];
                for (std::size_t g = 0; g < grids; ++g) {
                    const auto& lv = system.grids[g].levels;
                    while (lv[finest[g]].cube_of[y] != lv[finest[g]].cube_of[x]) --finest[g];
                }
            }
            const double ball_mass = space.closed_ball_measure(x, t);
            const double radius = std::nextafter(t, std::numeric_limits<double>::infinity());
            const std::size_t need = required_level_index(system, radius);
            bool fits = false;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t g = 0; g < grids; ++g) {
                const auto& lvl = system.grids[g].levels[finest[g]];
                best = std::min(best, lvl.cubes[lvl.cube_of[x]].measure / ball_mass);
                fits = fits || finest[g] >= need;
            }
            out.ball_to_cube = std::max(out.ball_to_cube, best);
            if (!fits && out.property_b) {
                out.property_b = false;
                out.witness_center = x;
                out.witness_radius = radius;
            }
        }
    }
    return out;
}

std::vector<CubeRef> same_level_neighbours(const AdjacentGridSystem& system, const CubeRef& ref) {
    const DyadicCube& q = system.cube(ref);
    std::vector<CubeRef> out;
    for (std::uint32_t g = 0; g < system.num_grids(); ++g) {
        const auto& lvl = system.level(g, ref.level);
        std::vector<std::uint32_t> hit;
        for (PointId y : q.members) hit.push_back(lvl.cube_of[y]);
        std::sort(hit.begin(), hit.end());
        hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
        for (std::uint32_t c : hit) out.push_back(CubeRef{g, ref.level, c});
    }
    return out;
}

CubeRef generalized_dyadic_parent(const AdjacentGridSystem& system, const CubeRef& ref) {
    if (ref.level - 2 < system.k_min) {
        throw GdpMissing("gdp missing: " + cube_name(ref.grid + 1, ref.level, ref.index) +
                         " has no level two scales coarser");
    }
    std::vector<char> in_union(system.space_size, 0);
    for (const CubeRef& nb : same_level_neighbours(system, ref)) {
        for (PointId y : system.cube(nb).members) in_union[y] = 1;
    }
    std::vector<PointId> united;
    for (PointId y = 0; y < system.space_size; ++y)
        if (in_union[y]) united.push_back(y);
    for (std::uint32_t g = 0; g < system.num_grids(); ++g) {
        const auto& coarse = system.level(g, ref.level - 2);
        const std::uint32_t candidate = coarse.cube_of[united.front()];
        const bool contains = std::all_of(united.begin(), united.end(),
                                          [&](PointId y) { return coarse.cube_of[y] == candidate; });
        if (contains) return CubeRef{g, ref.level - 2, candidate};
    }
    throw GdpMissing("gdp missing: no level " + std::to_string(ref.level - 2) + " cube contains the neighbours of " +
                     cube_name(ref.grid + 1, ref.level, ref.index));
}

double s_formula(double a_dbl, double a0, double delta) {
    return a_dbl * std::pow(a0 / (delta * delta * delta), std::log2(a_dbl));
}

SConstants compute_S(const Space& space, const AdjacentGridSystem& system) {
    SConstants out;
    out.s_formula = s_formula(space.doubling(), space.a0(), system.delta);
    out.s_measured = 1.0;
    for (std::uint32_t g = 0; g < system.num_grids(); ++g) {
        for (int k = system.k_min + 2; k <= system.k_max; ++k) {
            const auto& lvl = system.level(g, k);
            for (std::uint32_t c = 0; c < lvl.cubes.size(); ++c) {
                const CubeRef ref{g, k, c};
                const double parent_mass = system.cube(generalized_dyadic_parent(system, ref)).measure;
                for (const CubeRef& nb : same_level_neighbours(system, ref)) {
                    out.s_measured = std::max(out.s_measured, parent_mass / system.cube(nb).measure);
                }
            }
        }
    }
    return out;
}

std::string dump_grids(const AdjacentGridSystem& system) {
    std::ostringstream os;
    for (const auto& grid : system.grids) {
        for (const auto& lvl : grid.levels) {
            for (const auto& cube : lvl.cubes) {
                os << grid.id << ' ' << lvl.level << ' ' << cube.index << ' ' << cube.center << ' '
                   << (cube.parent ? static_cast<long long>(*cube.parent) : -1LL);
                for (PointId y : cube.members) os << ' ' << y;
                os << '\n';
            }
        }
    }
    return os.str();
}

}  // namespace shtlab
