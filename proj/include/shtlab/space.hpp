#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shtlab/numeric.hpp"

namespace shtlab {

using PointId = std::uint32_t;

/// Open ball B(center, radius) on a finite space, stored in threshold form:
/// the members are exactly {y : d(center, y) <= threshold}, and the smallest
/// open radius realizing that set is radius() = nextafter(threshold, +inf).
struct Ball {
    PointId center = 0;
    double threshold = 0.0;
    std::vector<PointId> members;  // ascending ids
    double measure = 0.0;

    double radius() const;
};

/// Finite quasi-metric measure space. Immutable once constructed; the
/// constructor validates the data and computes A0, A and A1.
class Space {
public:
    /// `dist` is row-major n x n. Throws ValidationError naming the first
    /// offending entry.
    Space(std::size_t n, std::vector<double> dist, std::vector<double> mass);

    std::size_t size() const noexcept { return n_; }
    double dist(PointId x, PointId y) const noexcept { return dist_[x * n_ + y]; }
    std::span<const double> distance_row(PointId x) const { return {dist_.data() + x * n_, n_}; }
    double mass(PointId x) const noexcept { return mass_[x]; }
    std::span<const double> masses() const noexcept { return mass_; }
    double total_mass() const noexcept { return total_mass_; }
    double diameter() const noexcept { return diameter_; }
    double min_separation() const noexcept { return min_separation_; }

    /// Quasi-metric constant A0 (>= 1).
    double a0() const noexcept { return a0_; }
    /// Doubling constant A over the canonical radius set.
    double doubling() const noexcept { return a_dbl_; }
    /// Greedy geometric-doubling count A1.
    std::size_t geometric_doubling() const noexcept { return a1_geo_; }
    /// A^(3 log2 A0 + 5); A1 above this is reported as a warning only.
    double homogeneity_bound() const;
    bool homogeneity_bound_holds() const { return static_cast<double>(a1_geo_) <= homogeneity_bound(); }

    /// Points ordered by distance from x (ties by id); starts with x itself.
    std::span<const PointId> by_distance(PointId x) const { return {order_.data() + x * n_, n_}; }
    /// Sorted distinct values d(x, .) including 0.
    std::span<const double> thresholds_from(PointId x) const;
    /// Sorted distinct entries of the whole matrix including 0.
    std::span<const double> distinct_distances() const noexcept { return distinct_; }

    /// mu({y : d(x,y) <= threshold}).
    double closed_ball_measure(PointId x, double threshold) const;
    /// mu(B(x, r)) for the open ball of radius r > 0.
    double ball_measure(PointId x, double radius) const;

    /// All distinct canonical balls (deduplicated member sets).
    const std::vector<Ball>& balls() const noexcept { return balls_; }
    /// Indices into balls() of every ball that contains x.
    std::span<const std::uint32_t> balls_containing(PointId x) const;

    /// Hash of the distance matrix and masses, used to match grids to spaces.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

    std::string describe() const;
    void set_label(std::string label) { label_ = std::move(label); }
    const std::string& label() const noexcept { return label_; }

private:
    std::size_t n_;
    std::vector<double> dist_;
    std::vector<double> mass_;
    double total_mass_ = 0.0;
    double diameter_ = 0.0;
    double min_separation_ = 0.0;
    double a0_ = 1.0;
    double a_dbl_ = 1.0;
    std::size_t a1_geo_ = 1;
    std::vector<PointId> order_;
    std::vector<double> sorted_dist_;  // n x n, d(x, order_[x][i])
    std::vector<double> prefix_mass_;  // n x n, cumulative masses along order_
    std::vector<double> thresholds_;
    std::vector<std::size_t> threshold_offsets_;
    std::vector<double> distinct_;
    std::vector<Ball> balls_;
    std::vector<std::uint32_t> ball_index_;
    std::vector<std::size_t> ball_index_offsets_;
    std::uint64_t fingerprint_ = 0;
    std::string label_;
};

/// max over triples z not in {x, y} of d(x,y) / (d(x,z) + d(z,y)), clamped below at 1.
double compute_quasi_metric_constant(const Space& space);

/// Smallest A with mu(B(x,r)) <= A mu(B(x,r/2)) for every x and every r in
/// {d+ulp, 2(d+ulp) : d a distinct distance value}.
double compute_doubling_constant(const Space& space);

/// Max over canonical balls B(x,r) of the greedy cover count by radius r/2
/// balls centred at members.
std::size_t compute_geometric_doubling(const Space& space);

/// Every distinct point set realizable as an open ball, with a witness
/// (center, threshold). Ordered by (size, members).
std::vector<Ball> enumerate_balls(const Space& space);

enum class SpaceKind { path, grid2d, discrete, cantor_ultrametric, random_planar, snowflake };

const char* to_string(SpaceKind kind);
SpaceKind parse_space_kind(const std::string& name);

/// Parameters for generate_space. `n` is the point count for path, discrete
/// and random_planar, the side length for grid2d (n*n points) and the depth
/// for cantor_ultrametric (2^n points). A snowflake applies d -> d^beta to
/// the `base` kind built with the same n.
struct GeneratorSpec {
    SpaceKind kind = SpaceKind::path;
    std::size_t n = 3;
    SpaceKind base = SpaceKind::path;
    double beta = 2.0;

    std::string describe() const;
};

/// Deterministic for a fixed seed.
Space generate_space(const GeneratorSpec& spec, std::uint64_t seed);

/// Parses "kind:n", "snowflake-<base>:n:beta" (e.g. "snowflake-path:3:2").
GeneratorSpec parse_generator_spec(const std::string& text);

/// Copy of `space` with points relabelled: new point i is old point perm[i].
Space permute_space(const Space& space, std::span<const PointId> perm);

}  // namespace shtlab
