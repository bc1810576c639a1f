#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shtlab/check.hpp"
#include "shtlab/numeric.hpp"

namespace shtlab {

/// p(.) with entries in (0, inf]. Finite entries above 700 are rejected:
/// such exponents must be written as inf.
class ExponentFunction {
public:
    static constexpr double kFiniteCap = 700.0;

    explicit ExponentFunction(std::vector<double> p);
    static ExponentFunction constant(std::size_t n, double p);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t x) const noexcept { return p_[x]; }
    bool is_infinite(std::size_t x) const noexcept { return std::isinf(p_[x]); }
    const std::vector<std::size_t>& omega_inf() const noexcept { return omega_inf_; }
    double p_minus() const noexcept { return p_minus_; }
    bool is_constant() const;
    std::span<const double> values() const noexcept { return p_; }

    /// s p(.); throws when a finite product exceeds the cap.
    ExponentFunction scaled(double s) const;
    std::string describe() const;

private:
    std::vector<double> p_;
    std::vector<std::size_t> omega_inf_;
    double p_minus_ = 0.0;
};

enum class ModularKind { sum, max };

const char* to_string(ModularKind kind);
ModularKind parse_modular_kind(const std::string& text);

/// Sum kind: sum_{p(x) finite} |f|^p(x) mass(x) + max_{p(x) = inf} |f(x)|.
/// Max kind: the larger of the two parts. Overflow gives +inf.
double modular(std::span<const double> f, const ExponentFunction& p, std::span<const double> mass, ModularKind kind);

/// inf{lambda > 0 : modular(f / lambda) <= 1}, bracketed from max|f| and bisected
/// down to adjacent doubles; the returned value is the feasible end.
double luxemburg_norm(std::span<const double> f, const ExponentFunction& p, std::span<const double> mass,
                      ModularKind kind);

/// Either L^{p(.)} or the r-convexification of another lattice. A
/// convexification exponent may be given as r = 1/(1+eta), which keeps r
/// distinguishable from 1 when eta is below machine epsilon.
class Lattice {
public:
    static Lattice lebesgue(ExponentFunction p, ModularKind kind, std::vector<double> mass);
    static Lattice convexified(const Lattice& base, double r);
    static Lattice convexified_below_one(const Lattice& base, double eta);

    double quasinorm(std::span<const double> f) const;

    double c_tri() const noexcept { return c_tri_; }
    double rho() const noexcept { return rho_; }
    double c_fatou() const noexcept { return c_fatou_; }
    std::size_t size() const noexcept { return mass_.size(); }
    std::span<const double> mass() const noexcept { return mass_; }
    std::string describe() const;

    bool is_lebesgue() const noexcept { return std::holds_alternative<Lebesgue>(v_); }
    /// Base exponent and kind for L^{p(.)}; throws for convexified lattices.
    const ExponentFunction& exponent() const;
    ModularKind kind() const;
    /// Convexified lattice pieces; throw for L^{p(.)}.
    const Lattice& base() const;
    double r() const;

private:
    struct Lebesgue {
        ExponentFunction p;
        ModularKind kind;
    };
    struct Convexified {
        std::shared_ptr<const Lattice> base;
        double r;
        double eta;  // > 0 when r = 1/(1+eta)
    };

    Lattice(std::variant<Lebesgue, Convexified> v, std::vector<double> mass);
    double to_power(double x) const;    // x^r
    double from_power(double x) const;  // x^(1/r)

    std::variant<Lebesgue, Convexified> v_;
    std::vector<double> mass_;
    double c_tri_ = 1.0;
    double rho_ = 1.0;
    double c_fatou_ = 1.0;
};

/// Modular monotonicity (i), scaling (ii) and the p_- < 1 convexity (iii),
/// for the given kind. (ii) needs 0 < alpha < 1; (iii) runs only when p_- < 1
/// and uses beta = 1 - alpha.
std::vector<CheckRecord> verify_modular_properties(const ExponentFunction& p, std::span<const double> mass,
                                                   ModularKind kind, std::span<const double> f,
                                                   std::span<const double> g, double alpha,
                                                   std::string_view label = {});

/// ||f + g|| <= C_tri (||f|| + ||g||).
std::vector<CheckRecord> verify_quasi_triangle(const Lattice& lattice, std::span<const double> f,
                                               std::span<const double> g, std::string_view label = {});

/// Sum kind: 2^{-(1/s) max{1/p_-,1}} ||f||_{(L^p)^(s)} <= ||f||_{sp} <= 2^{max{1/(s p_-),1}} ||f||_{(L^p)^(s)}.
/// Max kind: the two quasi-norms coincide.
std::vector<CheckRecord> verify_norm_equivalences(const ExponentFunction& p, std::span<const double> mass,
                                                  ModularKind kind, double s, std::span<const double> f,
                                                  std::string_view label = {});

/// ||sum f_k|| <= 2^{1/rho} C_F (sum ||f_k||^rho)^{1/rho} for nonnegative f_k.
std::vector<CheckRecord> aoki_rolewicz_check(const Lattice& lattice, const std::vector<PointFunction>& parts,
                                             std::string_view label = {});

/// Parses "inf"-aware comma lists ("2,3,2", "1,inf") cycled to length n.
ExponentFunction parse_exponent_list(const std::string& text, std::size_t n);

}  // namespace shtlab
