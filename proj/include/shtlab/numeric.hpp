#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace shtlab {

/// Real-valued function on the points of a finite space.
using PointFunction = std::vector<double>;

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

inline double max_abs(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

inline PointFunction abs_of(std::span<const double> f) {
    PointFunction out(f.size());
    std::transform(f.begin(), f.end(), out.begin(), [](double v) { return std::abs(v); });
    return out;
}

inline PointFunction pow_abs(std::span<const double> f, double power) {
    PointFunction out(f.size());
    std::transform(f.begin(), f.end(), out.begin(),
                   [power](double v) { return power == 1.0 ? std::abs(v) : std::pow(std::abs(v), power); });
    return out;
}

// Exponents 1+eta and 1/(1+eta) for eta far below machine epsilon: pow(x, 1+eta)
// would round the exponent to 1 first.

/// x^(1+eta), x >= 0.
inline double pow_1p(double x, double eta) {
    if (x == 0.0 || eta == 0.0) return x;
    return x * std::exp(eta * std::log(x));
}

/// x^(1/(1+eta)), x >= 0.
inline double root_1p(double x, double eta) {
    if (x == 0.0 || eta == 0.0) return x;
    return x * std::exp(-(eta / (1.0 + eta)) * std::log(x));
}

/// True when lhs <= rhs up to `rel` times the larger magnitude.
inline bool le_rel(double lhs, double rhs, double rel) {
    if (lhs <= rhs) return true;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return lhs - rhs <= rel * scale;
}

/// Relative excess of lhs over rhs; positive means lhs > rhs.
inline double rel_excess(double lhs, double rhs) {
    if (lhs == rhs) return 0.0;
    if (std::isinf(lhs) && std::isinf(rhs) && lhs == rhs) return 0.0;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    if (!std::isfinite(scale)) return lhs > rhs ? std::numeric_limits<double>::infinity() : -1.0;
    return (lhs - rhs) / scale;
}

inline bool eq_rel(double a, double b, double rel) {
    return le_rel(a, b, rel) && le_rel(b, a, rel);
}

/// Deterministic random source. Distribution code is local so streams are
/// portable across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Independent child seed for stream `index` derived from `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        return mix(seed ^ mix(index + 0x632be59bd9b4e019ULL));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace shtlab
