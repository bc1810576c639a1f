#pragma once

#include <cstdint>
#include <string>

#include "shtlab/lattice.hpp"
#include "shtlab/space.hpp"

namespace shtlab {

// Space text format: line 1 holds n, the next n lines the distance rows, the
// last line the n masses. Blank lines and '#' comments are ignored.
// Diagnostics carry the 1-based line and column of the first bad token.

Space parse_space_text(const std::string& text);
Space load_space_file(const std::string& path);
std::string format_space(const Space& space);

/// One value per line, n lines. `weight` additionally rejects entries <= 0.
PointFunction parse_function_text(const std::string& text, std::size_t n, bool weight);
PointFunction load_function_file(const std::string& path, std::size_t n, bool weight);
std::string format_function(std::span<const double> f);

/// One exponent per line, "inf" allowed.
ExponentFunction parse_exponent_text(const std::string& text, std::size_t n);

/// An existing file path is read as a space file; anything else is parsed as a
/// generator spec such as "path:3".
Space resolve_space(const std::string& source, std::uint64_t seed);

/// An existing file path is read as an exponent file; anything else is a
/// comma list cycled to n entries.
ExponentFunction resolve_exponents(const std::string& source, std::size_t n);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace shtlab
