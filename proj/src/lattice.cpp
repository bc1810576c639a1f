#include "shtlab/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "shtlab/error.hpp"

namespace shtlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string short_number(double v) {
    if (std::isinf(v)) return "inf";
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// modular(f / lambda) without materializing f / lambda.
double scaled_modular(std::span<const double> f, const ExponentFunction& p, std::span<const double> mass,
                      ModularKind kind, double lambda) {
    CompensatedSum finite_part;
    double inf_part = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) {
        const double v = std::abs(f[x]) / lambda;
        if (p.is_infinite(x)) {
            inf_part = std::max(inf_part, v);
        } else if (v != 0.0) {
            const double term = std::pow(v, p[x]) * mass[x];
            if (std::isinf(term)) return kInf;
            finite_part.add(term);
        }
    }
    const double fp = finite_part.value();
    if (std::isinf(fp)) return kInf;
    return kind == ModularKind::sum ? fp + inf_part : std::max(fp, inf_part);
}

void check_sizes(std::span<const double> f, std::size_t p, std::size_t mass) {
    if (f.size() != p || f.size() != mass) {
        throw PreconditionError("function, exponent and mass sizes differ");
    }
}

}  // namespace

ExponentFunction::ExponentFunction(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError(ValidationCode::malformed_dimensions, "exponent function is empty");
    p_minus_ = kInf;
    for (std::size_t x = 0; x < p_.size(); ++x) {
        const double v = p_[x];
        if (std::isnan(v) || !(v > 0.0)) {
            throw ValidationError(ValidationCode::invalid_parameter,
                                  "exponent entry " + std::to_string(x) + " must be positive");
        }
        if (std::isfinite(v) && v > kFiniteCap) {
            throw ValidationError(ValidationCode::invalid_parameter,
                                  "exponent entry " + std::to_string(x) + " exceeds 700; write it as inf");
        }
        if (std::isinf(v)) omega_inf_.push_back(x);
        p_minus_ = std::min(p_minus_, v);
    }
}

ExponentFunction ExponentFunction::constant(std::size_t n, double p) {
    return ExponentFunction(std::vector<double>(n, p));
}

bool ExponentFunction::is_constant() const {
    return std::all_of(p_.begin(), p_.end(), [&](double v) { return v == p_.front(); });
}

ExponentFunction ExponentFunction::scaled(double s) const {
    if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionError("exponent scale must be positive");
    std::vector<double> q(p_);
    for (double& v : q) v *= s;
    return ExponentFunction(std::move(q));
}

std::string ExponentFunction::describe() const {
    if (is_constant()) return short_number(p_.front());
    std::string out;
    for (std::size_t x = 0; x < p_.size(); ++x) {
        if (x) out += ' ';
        out += short_number(p_[x]);
    }
    return out;
}

const char* to_string(ModularKind kind) { return kind == ModularKind::sum ? "sum" : "max"; }

ModularKind parse_modular_kind(const std::string& text) {
    if (text == "sum") return ModularKind::sum;
    if (text == "max") return ModularKind::max;
    throw ValidationError(ValidationCode::invalid_parameter, "unknown modular kind '" + text + "' (sum or max)");
}

double modular(std::span<const double> f, const ExponentFunction& p, std::span<const double> mass,
               ModularKind kind) {
    check_sizes(f, p.size(), mass.size());
    return scaled_modular(f, p, mass, kind, 1.0);
}

double luxemburg_norm(std::span<const double> f, const ExponentFunction& p, std::span<const double> mass,
                      ModularKind kind) {
    check_sizes(f, p.size(), mass.size());
    const double top = max_abs(f);
    if (top == 0.0) return 0.0;
    if (!std::isfinite(top)) throw PreconditionError("luxemburg_norm needs finite values");
    auto feasible = [&](double lambda) { return scaled_modular(f, p, mass, kind, lambda) <= 1.0; };

    constexpr int kMaxIterations = 200;
    int iterations = 0;
    double lo = top;
    double hi = top;
    if (feasible(top)) {
        lo = top / 2.0;
        while (feasible(lo)) {
            hi = lo;
            lo /= 2.0;
            if (++iterations > kMaxIterations || lo == 0.0) throw SolverError("luxemburg_norm: cannot bracket from below");
        }
    } else {
        hi = top * 2.0;
        while (!feasible(hi)) {
            lo = hi;
            hi *= 2.0;
            if (++iterations > kMaxIterations || std::isinf(hi)) {
                throw SolverError("luxemburg_norm: cannot bracket from above");
            }
        }
    }
    while (true) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) break;
        if (feasible(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (++iterations > kMaxIterations) {
            std::ostringstream os;
            os.precision(17);
            os << "luxemburg_norm: no convergence after " << kMaxIterations << " iterations, bracket [" << lo << ", "
               << hi << "]";
            throw SolverError(os.str());
        }
    }
    return hi;
}

Lattice::Lattice(std::variant<Lebesgue, Convexified> v, std::vector<double> mass)
    : v_(std::move(v)), mass_(std::move(mass)) {}

Lattice Lattice::lebesgue(ExponentFunction p, ModularKind kind, std::vector<double> mass) {
    if (p.size() != mass.size()) throw PreconditionError("exponent and mass sizes differ");
    const double pm = p.p_minus();
    Lattice out(Lebesgue{std::move(p), kind}, std::move(mass));
    out.c_tri_ = std::max(1.0, std::pow(2.0, 1.0 / pm - 1.0));
    out.rho_ = std::min(pm, 1.0);
    out.c_fatou_ = 1.0;
    return out;
}

Lattice Lattice::convexified(const Lattice& base, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("convexification exponent must be positive");
    Lattice out(Convexified{std::make_shared<const Lattice>(base), r, 0.0}, base.mass_);
    out.c_tri_ = std::pow(2.0, std::abs(1.0 - 1.0 / r)) * std::pow(base.c_tri_, 1.0 / r);
    out.c_fatou_ = std::pow(base.c_fatou_, 1.0 / r);
    out.rho_ = 1.0 / (1.0 + std::log2(out.c_tri_));
    return out;
}

Lattice Lattice::convexified_below_one(const Lattice& base, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw PreconditionError("eta must be positive");
    Lattice out(Convexified{std::make_shared<const Lattice>(base), 1.0 / (1.0 + eta), eta}, base.mass_);
    out.c_tri_ = std::pow(2.0, eta) * pow_1p(base.c_tri_, eta);
    out.c_fatou_ = pow_1p(base.c_fatou_, eta);
    out.rho_ = 1.0 / (1.0 + std::log2(out.c_tri_));
    return out;
}

double Lattice::to_power(double x) const {
    const auto& c = std::get<Convexified>(v_);
    if (c.eta > 0.0) return root_1p(x, c.eta);
    return c.r == 1.0 ? x : std::pow(x, c.r);
}

double Lattice::from_power(double x) const {
    const auto& c = std::get<Convexified>(v_);
    if (c.eta > 0.0) return pow_1p(x, c.eta);
    return c.r == 1.0 ? x : std::pow(x, 1.0 / c.r);
}

double Lattice::quasinorm(std::span<const double> f) const {
    if (const auto* leb = std::get_if<Lebesgue>(&v_)) return luxemburg_norm(f, leb->p, mass_, leb->kind);
    const auto& c = std::get<Convexified>(v_);
    PointFunction g(f.size());
    std::transform(f.begin(), f.end(), g.begin(), [this](double v) { return to_power(std::abs(v)); });
    return from_power(c.base->quasinorm(g));
}

std::string Lattice::describe() const {
    if (const auto* leb = std::get_if<Lebesgue>(&v_)) {
        return "L^p(" + leb->p.describe() + ")/" + to_string(leb->kind);
    }
    const auto& c = std::get<Convexified>(v_);
    if (c.eta > 0.0) {
        std::ostringstream os;
        os.precision(6);
        os << "(" << c.base->describe() << ")^(1/(1+" << c.eta << "))";
        return os.str();
    }
    return "(" + c.base->describe() + ")^(" + short_number(c.r) + ")";
}

const ExponentFunction& Lattice::exponent() const {
    if (const auto* leb = std::get_if<Lebesgue>(&v_)) return leb->p;
    throw PreconditionError("lattice is not a variable Lebesgue space");
}

ModularKind Lattice::kind() const {
    if (const auto* leb = std::get_if<Lebesgue>(&v_)) return leb->kind;
    throw PreconditionError("lattice is not a variable Lebesgue space");
}

const Lattice& Lattice::base() const {
    if (const auto* c = std::get_if<Convexified>(&v_)) return *c->base;
    throw PreconditionError("lattice is not a convexification");
}

double Lattice::r() const {
    if (const auto* c = std::get_if<Convexified>(&v_)) return c->r;
    throw PreconditionError("lattice is not a convexification");
}

std::vector<CheckRecord> verify_modular_properties(const ExponentFunction& p, std::span<const double> mass,
                                                   ModularKind kind, std::span<const double> f,
                                                   std::span<const double> g, double alpha,
                                                   std::string_view label) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("modular properties need 0 < alpha < 1");
    check_sizes(f, p.size(), mass.size());
    check_sizes(g, p.size(), mass.size());
    const std::string tag = std::string("[") + to_string(kind) + "]";
    const std::string w(label);
    const double mf = modular(f, p, mass, kind);
    const double mg = modular(g, p, mass, kind);
    std::vector<CheckRecord> out;

    PointFunction below(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) below[x] = std::min(std::abs(g[x]), std::abs(f[x]));
    out.push_back(check_le("modular.order" + tag, "|g| <= |f| => m(g) <= m(f)", modular(below, p, mass, kind), mf,
                           slack::exact, w));

    PointFunction scaled(f.size());
    std::transform(f.begin(), f.end(), scaled.begin(), [alpha](double v) { return alpha * v; });
    out.push_back(check_le("modular.scaling" + tag, "m(a f) <= a^min{p_-,1} m(f), 0<a<1",
                           modular(scaled, p, mass, kind), std::pow(alpha, std::min(p.p_minus(), 1.0)) * mf,
                           slack::exact, w));

    if (p.p_minus() < 1.0) {
        const double beta = 1.0 - alpha;
        PointFunction mix(f.size());
        for (std::size_t x = 0; x < f.size(); ++x) mix[x] = alpha * f[x] + beta * g[x];
        const double pm = p.p_minus();
        out.push_back(check_le("modular.convexity" + tag, "m(a f + b g) <= a^p_- m(f) + b^p_- m(g), a+b=1, p_-<1",
                               modular(mix, p, mass, kind), std::pow(alpha, pm) * mf + std::pow(beta, pm) * mg,
                               slack::exact, w));
    }
    return out;
}

std::vector<CheckRecord> verify_quasi_triangle(const Lattice& lattice, std::span<const double> f,
                                               std::span<const double> g, std::string_view label) {
    if (f.size() != g.size()) throw PreconditionError("function sizes differ");
    PointFunction sum(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) sum[x] = f[x] + g[x];
    const double rhs = lattice.c_tri() * (lattice.quasinorm(f) + lattice.quasinorm(g));
    return {check_le("quasi_triangle[" + lattice.describe() + "]", "||f+g|| <= C_tri (||f|| + ||g||)",
                     lattice.quasinorm(sum), rhs, slack::solver, std::string(label))};
}

std::vector<CheckRecord> verify_norm_equivalences(const ExponentFunction& p, std::span<const double> mass,
                                                  ModularKind kind, double s, std::span<const double> f,
                                                  std::string_view label) {
    if (!(s > 0.0)) throw PreconditionError("norm equivalence needs s > 0");
    const std::vector<double> m(mass.begin(), mass.end());
    const Lattice base = Lattice::lebesgue(p, kind, m);
    const double conv = Lattice::convexified(base, s).quasinorm(f);
    const double direct = luxemburg_norm(f, p.scaled(s), mass, kind);
    const std::string w = std::string(label) + (label.empty() ? "" : ", ") + "s=" + short_number(s);
    if (kind == ModularKind::max) {
        return {check_eq("norm_equivalence.max_equality", "||f||_{(L^p)^(s)} = ||f||_{sp} (max modular)", direct,
                         conv, slack::solver, w)};
    }
    const double pm = p.p_minus();
    const double lower = std::pow(2.0, -(1.0 / s) * std::max(1.0 / pm, 1.0));
    const double upper = std::pow(2.0, std::max(1.0 / (s * pm), 1.0));
    return {
        check_le("norm_equivalence.sandwich_lower", "2^{-(1/s)max{1/p_-,1}} ||f||_{(L^p)^(s)} <= ||f||_{sp}",
                 lower * conv, direct, slack::solver, w),
        check_le("norm_equivalence.sandwich_upper", "||f||_{sp} <= 2^{max{1/(s p_-),1}} ||f||_{(L^p)^(s)}", direct,
                 upper * conv, slack::solver, w),
    };
}

std::vector<CheckRecord> aoki_rolewicz_check(const Lattice& lattice, const std::vector<PointFunction>& parts,
                                             std::string_view label) {
    if (parts.empty()) throw PreconditionError("Aoki-Rolewicz check needs at least one function");
    const double rho = lattice.rho();
    PointFunction total(lattice.size(), 0.0);
    std::vector<CompensatedSum> acc(lattice.size());
    CompensatedSum powers;
    for (const auto& f : parts) {
        if (f.size() != lattice.size()) throw PreconditionError("function size differs from the lattice");
        for (std::size_t x = 0; x < f.size(); ++x) {
            if (f[x] < 0.0) throw PreconditionError("Aoki-Rolewicz check needs nonnegative functions");
            acc[x].add(f[x]);
        }
        powers.add(std::pow(lattice.quasinorm(f), rho));
    }
    for (std::size_t x = 0; x < total.size(); ++x) total[x] = acc[x].value();
    const double rhs = std::pow(2.0, 1.0 / rho) * lattice.c_fatou() * std::pow(powers.value(), 1.0 / rho);
    return {check_le("aoki_rolewicz[" + lattice.describe() + "]", "||sum f_k|| <= 2^{1/rho} C_F (sum ||f_k||^rho)^{1/rho}",
                     lattice.quasinorm(total), rhs, slack::solver, std::string(label))};
}

ExponentFunction parse_exponent_list(const std::string& text, std::size_t n) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        std::string tok = text.substr(start, comma - start);
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        tok = b == std::string::npos ? std::string() : tok.substr(b, e - b + 1);
        const std::size_t column = start + 1 + (b == std::string::npos ? 0 : b);
        if (tok == "inf" || tok == "Inf" || tok == "infinity") {
            values.push_back(kInf);
        } else {
            const std::size_t slash = tok.find('/');
            auto parse = [&](const std::string& s) {
                double v = 0.0;
                const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
                if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
                    throw ValidationError(ValidationCode::parse_error, "cannot parse exponent '" + tok + "'", 1, column);
                }
                return v;
            };
            if (slash == std::string::npos) {
                values.push_back(parse(tok));
            } else {
                values.push_back(parse(tok.substr(0, slash)) / parse(tok.substr(slash + 1)));
            }
        }
        start = comma + 1;
    }
    if (n == 0) n = values.size();
    std::vector<double> cycled(n);
    for (std::size_t i = 0; i < n; ++i) cycled[i] = values[i % values.size()];
    return ExponentFunction(std::move(cycled));
}

}  // namespace shtlab
