#include "shtlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <sstream>

#include "shtlab/error.hpp"

namespace shtlab {

const char* to_string(ValidationCode code) {
    switch (code) {
        case ValidationCode::parse_error: return "parse_error";
        case ValidationCode::malformed_dimensions: return "malformed_dimensions";
        case ValidationCode::asymmetric_distance: return "asymmetric_distance";
        case ValidationCode::nonzero_diagonal: return "nonzero_diagonal";
        case ValidationCode::nonpositive_distance: return "nonpositive_distance";
        case ValidationCode::nonpositive_mass: return "nonpositive_mass";
        case ValidationCode::nonfinite_value: return "nonfinite_value";
        case ValidationCode::invalid_parameter: return "invalid_parameter";
    }
    return "unknown";
}

ValidationError::ValidationError(ValidationCode code, const std::string& what, std::size_t line,
                                 std::size_t column)
    : Error(line == 0 ? what
                      : what + " (line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ")"),
      code_(code),
      line_(line),
      column_(column) {}

double Ball::radius() const { return std::nextafter(threshold, std::numeric_limits<double>::infinity()); }

namespace {

constexpr double kSymmetryTolerance = 1e-12;

std::string pair_name(std::size_t x, std::size_t y) {
    return "dist[" + std::to_string(x) + "][" + std::to_string(y) + "]";
}

void validate(std::size_t n, std::vector<double>& dist, const std::vector<double>& mass) {
    if (n < 2) {
        throw ValidationError(ValidationCode::malformed_dimensions,
                              "a space needs at least 2 points, got " + std::to_string(n));
    }
    if (dist.size() != n * n) {
        throw ValidationError(ValidationCode::malformed_dimensions,
                              "distance matrix has " + std::to_string(dist.size()) +
                                  " entries, expected " + std::to_string(n * n));
    }
    if (mass.size() != n) {
        throw ValidationError(ValidationCode::malformed_dimensions,
                              "mass vector has " + std::to_string(mass.size()) +
                                  " entries, expected " + std::to_string(n));
    }
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            const double d = dist[x * n + y];
            if (!std::isfinite(d)) {
                throw ValidationError(ValidationCode::nonfinite_value, pair_name(x, y) + " is not finite");
            }
            if (x == y && d != 0.0) {
                throw ValidationError(ValidationCode::nonzero_diagonal, pair_name(x, y) + " must be 0");
            }
            if (x != y && d <= 0.0) {
                throw ValidationError(ValidationCode::nonpositive_distance,
                                      pair_name(x, y) + " must be positive for distinct points");
            }
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            const double a = dist[x * n + y];
            const double b = dist[y * n + x];
            if (std::abs(a - b) > kSymmetryTolerance * std::max(a, b)) {
                std::ostringstream os;
                os.precision(17);
                os << pair_name(x, y) << " = " << a << " differs from " << pair_name(y, x) << " = " << b;
                throw ValidationError(ValidationCode::asymmetric_distance, os.str());
            }
            dist[y * n + x] = a;
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!std::isfinite(mass[x])) {
            throw ValidationError(ValidationCode::nonfinite_value,
                                  "mass[" + std::to_string(x) + "] is not finite");
        }
        if (mass[x] <= 0.0) {
            throw ValidationError(ValidationCode::nonpositive_mass,
                                  "mass[" + std::to_string(x) + "] must be strictly positive");
        }
    }
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Space::Space(std::size_t n, std::vector<double> dist, std::vector<double> mass)
    : n_(n), dist_(std::move(dist)), mass_(std::move(mass)) {
    validate(n_, dist_, mass_);

    total_mass_ = compensated_sum(mass_);
    diameter_ = 0.0;
    min_separation_ = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n_; ++x) {
        for (std::size_t y = x + 1; y < n_; ++y) {
            diameter_ = std::max(diameter_, dist_[x * n_ + y]);
            min_separation_ = std::min(min_separation_, dist_[x * n_ + y]);
        }
    }

    order_.resize(n_ * n_);
    sorted_dist_.resize(n_ * n_);
    prefix_mass_.resize(n_ * n_);
    threshold_offsets_.assign(n_ + 1, 0);
    for (PointId x = 0; x < n_; ++x) {
        auto row = std::span<PointId>(order_.data() + x * n_, n_);
        std::iota(row.begin(), row.end(), PointId{0});
        std::stable_sort(row.begin(), row.end(),
                         [&](PointId a, PointId b) { return this->dist(x, a) < this->dist(x, b); });
        CompensatedSum acc;
        for (std::size_t i = 0; i < n_; ++i) {
            sorted_dist_[x * n_ + i] = this->dist(x, row[i]);
            acc.add(mass_[row[i]]);
            prefix_mass_[x * n_ + i] = acc.value();
        }
        threshold_offsets_[x] = thresholds_.size();
        for (std::size_t i = 0; i < n_; ++i) {
            const double d = sorted_dist_[x * n_ + i];
            if (i == 0 || d != sorted_dist_[x * n_ + i - 1]) thresholds_.push_back(d);
        }
    }
    threshold_offsets_[n_] = thresholds_.size();

    distinct_ = dist_;
    std::sort(distinct_.begin(), distinct_.end());
    distinct_.erase(std::unique(distinct_.begin(), distinct_.end()), distinct_.end());

    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, &n_, sizeof(n_));
    h = fnv1a(h, dist_.data(), dist_.size() * sizeof(double));
    h = fnv1a(h, mass_.data(), mass_.size() * sizeof(double));
    fingerprint_ = h;

    a0_ = compute_quasi_metric_constant(*this);
    a_dbl_ = compute_doubling_constant(*this);
    a1_geo_ = compute_geometric_doubling(*this);
    balls_ = enumerate_balls(*this);

    std::vector<std::vector<std::uint32_t>> containing(n_);
    for (std::uint32_t b = 0; b < balls_.size(); ++b) {
        for (PointId y : balls_[b].members) containing[y].push_back(b);
    }
    ball_index_offsets_.assign(n_ + 1, 0);
    for (std::size_t x = 0; x < n_; ++x) {
        ball_index_offsets_[x] = ball_index_.size();
        ball_index_.insert(ball_index_.end(), containing[x].begin(), containing[x].end());
    }
    ball_index_offsets_[n_] = ball_index_.size();
}

double Space::homogeneity_bound() const {
    return std::pow(a_dbl_, 3.0 * std::log2(a0_) + 5.0);
}

std::span<const double> Space::thresholds_from(PointId x) const {
    return {thresholds_.data() + threshold_offsets_[x], threshold_offsets_[x + 1] - threshold_offsets_[x]};
}

double Space::closed_ball_measure(PointId x, double threshold) const {
    const double* first = sorted_dist_.data() + x * n_;
    const auto count = std::upper_bound(first, first + n_, threshold) - first;
    return count == 0 ? 0.0 : prefix_mass_[x * n_ + count - 1];
}

double Space::ball_measure(PointId x, double radius) const {
    const double* first = sorted_dist_.data() + x * n_;
    const auto count = std::lower_bound(first, first + n_, radius) - first;
    return count == 0 ? 0.0 : prefix_mass_[x * n_ + count - 1];
}

std::span<const std::uint32_t> Space::balls_containing(PointId x) const {
    return {ball_index_.data() + ball_index_offsets_[x], ball_index_offsets_[x + 1] - ball_index_offsets_[x]};
}

std::string Space::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (!label_.empty()) os << label_ << " ";
    os << "n=" << n_ << " A0=" << a0_ << " A=" << a_dbl_ << " A1=" << a1_geo_;
    return os.str();
}

double compute_quasi_metric_constant(const Space& space) {
    const std::size_t n = space.size();
    double a0 = 1.0;
    for (PointId x = 0; x < n; ++x) {
        for (PointId y = x + 1; y < n; ++y) {
            const double dxy = space.dist(x, y);
            for (PointId z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                a0 = std::max(a0, dxy / (space.dist(x, z) + space.dist(z, y)));
            }
        }
    }
    return a0;
}

double compute_doubling_constant(const Space& space) {
    double a = 1.0;
    for (PointId x = 0; x < space.size(); ++x) {
        for (double d : space.distinct_distances()) {
            // r = d+ulp: B(x,r) = {<= d}, B(x,r/2) = {<= d/2}; r = 2(d+ulp): {<= 2d} and {<= d}.
            const double inner = space.closed_ball_measure(x, d);
            a = std::max(a, inner / space.closed_ball_measure(x, d / 2.0));
            a = std::max(a, space.closed_ball_measure(x, 2.0 * d) / inner);
        }
    }
    return a;
}

std::size_t compute_geometric_doubling(const Space& space) {
    std::size_t best = 1;
    std::vector<PointId> members;
    std::vector<char> covered;
    for (PointId x = 0; x < space.size(); ++x) {
        const auto order = space.by_distance(x);
        std::size_t count = 0;
        for (double t : space.thresholds_from(x)) {
            while (count < order.size() && space.dist(x, order[count]) <= t) ++count;
            members.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
            std::sort(members.begin(), members.end());
            covered.assign(members.size(), 0);
            std::size_t balls = 0;
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (covered[i]) continue;
                ++balls;
                // Cover radius r/2 with r = nextafter(t): d < r/2 iff 2d <= t.
                for (std::size_t j = i; j < members.size(); ++j) {
                    if (!covered[j] && 2.0 * space.dist(members[i], members[j]) <= t) covered[j] = 1;
                }
            }
            best = std::max(best, balls);
        }
    }
    return best;
}

std::vector<Ball> enumerate_balls(const Space& space) {
    std::map<std::vector<PointId>, Ball> unique;
    for (PointId x = 0; x < space.size(); ++x) {
        const auto order = space.by_distance(x);
        std::size_t count = 0;
        for (double t : space.thresholds_from(x)) {
            while (count < order.size() && space.dist(x, order[count]) <= t) ++count;
            std::vector<PointId> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
            std::sort(members.begin(), members.end());
            if (unique.count(members)) continue;
            Ball ball;
            ball.center = x;
            ball.threshold = t;
            ball.members = members;
            ball.measure = space.closed_ball_measure(x, t);
            unique.emplace(std::move(members), std::move(ball));
        }
    }
    std::vector<Ball> out;
    out.reserve(unique.size());
    for (auto& [key, ball] : unique) out.push_back(std::move(ball));
    std::stable_sort(out.begin(), out.end(),
                     [](const Ball& a, const Ball& b) { return a.members.size() < b.members.size(); });
    return out;
}

const char* to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::path: return "path";
        case SpaceKind::grid2d: return "grid2d";
        case SpaceKind::discrete: return "discrete";
        case SpaceKind::cantor_ultrametric: return "cantor_ultrametric";
        case SpaceKind::random_planar: return "random_planar";
        case SpaceKind::snowflake: return "snowflake";
    }
    return "unknown";
}

SpaceKind parse_space_kind(const std::string& name) {
    if (name == "path") return SpaceKind::path;
    if (name == "grid2d") return SpaceKind::grid2d;
    if (name == "discrete") return SpaceKind::discrete;
    if (name == "cantor_ultrametric" || name == "cantor") return SpaceKind::cantor_ultrametric;
    if (name == "random_planar" || name == "planar") return SpaceKind::random_planar;
    if (name == "snowflake") return SpaceKind::snowflake;
    throw ValidationError(ValidationCode::invalid_parameter, "unknown space kind '" + name + "'");
}

std::string GeneratorSpec::describe() const {
    std::ostringstream os;
    if (kind == SpaceKind::snowflake) {
        os << "snowflake-" << to_string(base) << ":" << n << ":" << beta;
    } else {
        os << to_string(kind) << ":" << n;
    }
    return os.str();
}

namespace {

struct RawSpace {
    std::size_t n = 0;
    std::vector<double> dist;
    std::vector<double> mass;
};

RawSpace planar(const std::vector<std::pair<double, double>>& pts, std::vector<double> mass) {
    RawSpace raw;
    raw.n = pts.size();
    raw.dist.assign(raw.n * raw.n, 0.0);
    for (std::size_t i = 0; i < raw.n; ++i) {
        for (std::size_t j = i + 1; j < raw.n; ++j) {
            const double d = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
            raw.dist[i * raw.n + j] = d;
            raw.dist[j * raw.n + i] = d;
        }
    }
    raw.mass = std::move(mass);
    return raw;
}

RawSpace build_raw(SpaceKind kind, std::size_t n, std::uint64_t seed) {
    RawSpace raw;
    switch (kind) {
        case SpaceKind::path: {
            std::vector<std::pair<double, double>> pts;
            for (std::size_t i = 0; i < n; ++i) pts.emplace_back(static_cast<double>(i), 0.0);
            return planar(pts, std::vector<double>(n, 1.0));
        }
        case SpaceKind::grid2d: {
            std::vector<std::pair<double, double>> pts;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) pts.emplace_back(static_cast<double>(i), static_cast<double>(j));
            return planar(pts, std::vector<double>(pts.size(), 1.0));
        }
        case SpaceKind::discrete: {
            raw.n = n;
            raw.dist.assign(n * n, 1.0);
            for (std::size_t i = 0; i < n; ++i) raw.dist[i * n + i] = 0.0;
            raw.mass.assign(n, 1.0);
            return raw;
        }
        case SpaceKind::cantor_ultrametric: {
            if (n > 12) {
                throw ValidationError(ValidationCode::invalid_parameter, "cantor_ultrametric depth must be <= 12");
            }
            raw.n = std::size_t{1} << n;
            raw.dist.assign(raw.n * raw.n, 0.0);
            for (std::size_t i = 0; i < raw.n; ++i) {
                for (std::size_t j = 0; j < raw.n; ++j) {
                    if (i == j) continue;
                    // Labels are depth-bit words read from the most significant bit.
                    std::size_t common = 0;
                    while (common < n && (((i ^ j) >> (n - 1 - common)) & 1U) == 0) ++common;
                    raw.dist[i * raw.n + j] = std::ldexp(1.0, -static_cast<int>(common));
                }
            }
            raw.mass.assign(raw.n, 1.0);
            return raw;
        }
        case SpaceKind::random_planar: {
            Rng rng(seed);
            std::vector<std::pair<double, double>> pts;
            std::vector<double> mass;
            for (std::size_t i = 0; i < n; ++i) {
                const double px = rng.uniform();
                const double py = rng.uniform();
                pts.emplace_back(px, py);
            }
            for (std::size_t i = 0; i < n; ++i) mass.push_back(rng.uniform(0.5, 2.0));
            return planar(pts, std::move(mass));
        }
        case SpaceKind::snowflake:
            break;
    }
    throw ValidationError(ValidationCode::invalid_parameter, "snowflake cannot be its own base kind");
}

}  // namespace

Space generate_space(const GeneratorSpec& spec, std::uint64_t seed) {
    const std::size_t min_param = (spec.kind == SpaceKind::cantor_ultrametric ||
                                   (spec.kind == SpaceKind::snowflake && spec.base == SpaceKind::cantor_ultrametric))
                                      ? 1
                                      : 2;
    if (spec.n < min_param) {
        throw ValidationError(ValidationCode::invalid_parameter,
                              std::string("parameter n = ") + std::to_string(spec.n) + " yields fewer than 2 points");
    }
    RawSpace raw;
    if (spec.kind == SpaceKind::snowflake) {
        if (!(spec.beta > 0.0) || !std::isfinite(spec.beta)) {
            throw ValidationError(ValidationCode::invalid_parameter, "snowflake exponent must be positive");
        }
        raw = build_raw(spec.base, spec.n, seed);
        for (double& d : raw.dist) d = std::pow(d, spec.beta);
    } else {
        raw = build_raw(spec.kind, spec.n, seed);
    }
    Space space(raw.n, std::move(raw.dist), std::move(raw.mass));
    space.set_label(spec.describe());
    return space;
}

GeneratorSpec parse_generator_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() < 2) {
        throw ValidationError(ValidationCode::invalid_parameter,
                              "space spec '" + text + "' must look like kind:n or snowflake-<base>:n:beta");
    }
    GeneratorSpec spec;
    const std::string& kind = parts[0];
    try {
        spec.n = static_cast<std::size_t>(std::stoul(parts[1]));
    } catch (const std::exception&) {
        throw ValidationError(ValidationCode::invalid_parameter, "space spec '" + text + "' has a bad size");
    }
    if (kind.rfind("snowflake", 0) == 0) {
        spec.kind = SpaceKind::snowflake;
        spec.base = kind.size() > 10 && kind[9] == '-' ? parse_space_kind(kind.substr(10)) : SpaceKind::path;
        if (spec.base == SpaceKind::snowflake) {
            throw ValidationError(ValidationCode::invalid_parameter, "snowflake base must not be a snowflake");
        }
        if (parts.size() >= 3) {
            try {
                spec.beta = std::stod(parts[2]);
            } catch (const std::exception&) {
                throw ValidationError(ValidationCode::invalid_parameter, "space spec '" + text + "' has a bad beta");
            }
        }
    } else {
        spec.kind = parse_space_kind(kind);
    }
    return spec;
}

Space permute_space(const Space& space, std::span<const PointId> perm) {
    const std::size_t n = space.size();
    if (perm.size() != n) {
        throw PreconditionError("permutation length does not match the space");
    }
    std::vector<double> dist(n * n);
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) {
        mass[i] = space.mass(perm[i]);
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = space.dist(perm[i], perm[j]);
    }
    return Space(n, std::move(dist), std::move(mass));
}

}  // namespace shtlab
