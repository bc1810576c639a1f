#include "shtlab/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "shtlab/check.hpp"
#include "shtlab/error.hpp"

namespace shtlab {

namespace {

struct Token {
    std::string text;
    std::size_t column = 0;
};

struct Line {
    std::size_t number = 0;
    std::vector<Token> tokens;
};

std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            if (i >= raw.size()) break;
            const std::size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            line.tokens.push_back(Token{raw.substr(start, i - start), start + 1});
        }
        if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    return out;
}

double parse_real(const Token& tok, std::size_t line, bool allow_inf) {
    if (allow_inf && (tok.text == "inf" || tok.text == "Inf" || tok.text == "infinity")) {
        return std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw ValidationError(ValidationCode::parse_error, "cannot parse '" + tok.text + "' as a real number", line,
                              tok.column);
    }
    if (!allow_inf && !std::isfinite(v)) {
        throw ValidationError(ValidationCode::nonfinite_value, "value '" + tok.text + "' is not finite", line,
                              tok.column);
    }
    return v;
}

std::vector<double> parse_column(const std::string& text, std::size_t n, bool allow_inf, const char* what) {
    const auto lines = significant_lines(text);
    std::vector<double> out;
    for (const auto& line : lines) {
        if (line.tokens.size() != 1) {
            throw ValidationError(ValidationCode::malformed_dimensions,
                                  std::string(what) + " files hold one value per line", line.number,
                                  line.tokens[1].column);
        }
        if (out.size() == n) {
            throw ValidationError(ValidationCode::malformed_dimensions,
                                  "expected " + std::to_string(n) + " values, found more", line.number,
                                  line.tokens[0].column);
        }
        out.push_back(parse_real(line.tokens[0], line.number, allow_inf));
    }
    if (out.size() != n) {
        throw ValidationError(ValidationCode::malformed_dimensions,
                              "expected " + std::to_string(n) + " values, found " + std::to_string(out.size()),
                              lines.empty() ? 0 : lines.back().number);
    }
    return out;
}

}  // namespace

Space parse_space_text(const std::string& text) {
    const auto lines = significant_lines(text);
    if (lines.empty()) throw ValidationError(ValidationCode::malformed_dimensions, "space file is empty");
    const Line& head = lines.front();
    if (head.tokens.size() != 1) {
        throw ValidationError(ValidationCode::malformed_dimensions, "first line must hold only n", head.number,
                              head.tokens.size() > 1 ? head.tokens[1].column : 1);
    }
    std::size_t n = 0;
    {
        const auto& t = head.tokens[0].text;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), n);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
            throw ValidationError(ValidationCode::parse_error, "cannot parse point count '" + t + "'", head.number,
                                  head.tokens[0].column);
        }
    }
    if (n < 2) {
        throw ValidationError(ValidationCode::malformed_dimensions, "a space needs at least 2 points", head.number,
                              head.tokens[0].column);
    }
    if (lines.size() != n + 2) {
        const std::size_t at = lines.size() > n + 2 ? lines[n + 2].number : lines.back().number;
        throw ValidationError(ValidationCode::malformed_dimensions,
                              "expected " + std::to_string(n) + " distance rows and one mass line, found " +
                                  std::to_string(lines.size() - 1) + " lines",
                              at);
    }
    std::vector<double> dist(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        const Line& line = lines[1 + x];
        if (line.tokens.size() != n) {
            throw ValidationError(ValidationCode::malformed_dimensions,
                                  "distance row " + std::to_string(x) + " has " + std::to_string(line.tokens.size()) +
                                      " entries, expected " + std::to_string(n),
                                  line.number, line.tokens.size() > n ? line.tokens[n].column : 1);
        }
        for (std::size_t y = 0; y < n; ++y) {
            const double d = parse_real(line.tokens[y], line.number, false);
            const std::size_t col = line.tokens[y].column;
            if (x == y && d != 0.0) {
                throw ValidationError(ValidationCode::nonzero_diagonal,
                                      "d(" + std::to_string(x) + "," + std::to_string(x) + ") must be 0", line.number,
                                      col);
            }
            if (x != y && !(d > 0.0)) {
                throw ValidationError(ValidationCode::nonpositive_distance,
                                      "d(" + std::to_string(x) + "," + std::to_string(y) + ") must be positive",
                                      line.number, col);
            }
            dist[x * n + y] = d;
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < x; ++y) {
            const double a = dist[x * n + y];
            const double b = dist[y * n + x];
            if (std::abs(a - b) > 1e-12 * std::max(a, b)) {
                throw ValidationError(ValidationCode::asymmetric_distance,
                                      "d(" + std::to_string(x) + "," + std::to_string(y) + ") = " + format_double(a) +
                                          " differs from d(" + std::to_string(y) + "," + std::to_string(x) +
                                          ") = " + format_double(b),
                                      lines[1 + x].number, lines[1 + x].tokens[y].column);
            }
        }
    }
    const Line& last = lines.back();
    if (last.tokens.size() != n) {
        throw ValidationError(ValidationCode::malformed_dimensions,
                              "mass line has " + std::to_string(last.tokens.size()) + " entries, expected " +
                                  std::to_string(n),
                              last.number, last.tokens.size() > n ? last.tokens[n].column : 1);
    }
    std::vector<double> mass(n);
    for (std::size_t x = 0; x < n; ++x) {
        mass[x] = parse_real(last.tokens[x], last.number, false);
        if (!(mass[x] > 0.0)) {
            throw ValidationError(ValidationCode::nonpositive_mass,
                                  "mass of point " + std::to_string(x) + " must be positive", last.number,
                                  last.tokens[x].column);
        }
    }
    return Space(n, std::move(dist), std::move(mass));
}

Space load_space_file(const std::string& path) {
    Space s = parse_space_text(read_file(path));
    s.set_label(path);
    return s;
}

std::string format_space(const Space& space) {
    std::string out = std::to_string(space.size()) + "\n";
    for (PointId x = 0; x < space.size(); ++x) {
        for (PointId y = 0; y < space.size(); ++y) {
            if (y) out += ' ';
            out += format_double(space.dist(x, y));
        }
        out += '\n';
    }
    for (PointId x = 0; x < space.size(); ++x) {
        if (x) out += ' ';
        out += format_double(space.mass(x));
    }
    out += '\n';
    return out;
}

PointFunction parse_function_text(const std::string& text, std::size_t n, bool weight) {
    PointFunction f = parse_column(text, n, false, weight ? "weight" : "function");
    if (weight) {
        const auto lines = significant_lines(text);
        for (std::size_t x = 0; x < f.size(); ++x) {
            if (!(f[x] > 0.0)) {
                throw ValidationError(ValidationCode::invalid_parameter,
                                      "weight entry " + std::to_string(x) + " must be positive", lines[x].number,
                                      lines[x].tokens[0].column);
            }
        }
    }
    return f;
}

PointFunction load_function_file(const std::string& path, std::size_t n, bool weight) {
    return parse_function_text(read_file(path), n, weight);
}

std::string format_function(std::span<const double> f) {
    std::string out;
    for (double v : f) out += format_double(v) + "\n";
    return out;
}

ExponentFunction parse_exponent_text(const std::string& text, std::size_t n) {
    std::vector<double> p = parse_column(text, n, true, "exponent");
    const auto lines = significant_lines(text);
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (!(p[x] > 0.0)) {
            throw ValidationError(ValidationCode::invalid_parameter,
                                  "exponent entry " + std::to_string(x) + " must be positive", lines[x].number,
                                  lines[x].tokens[0].column);
        }
    }
    return ExponentFunction(std::move(p));
}

Space resolve_space(const std::string& source, std::uint64_t seed) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(source, ec)) return load_space_file(source);
    Space s = generate_space(parse_generator_spec(source), seed);
    s.set_label(source);
    return s;
}

ExponentFunction resolve_exponents(const std::string& source, std::size_t n) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(source, ec)) return parse_exponent_text(read_file(source), n);
    return parse_exponent_list(source, n);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(ValidationCode::parse_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace shtlab
