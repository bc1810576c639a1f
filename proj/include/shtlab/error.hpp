#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shtlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ValidationCode {
    parse_error,
    malformed_dimensions,
    asymmetric_distance,
    nonzero_diagonal,
    nonpositive_distance,
    nonpositive_mass,
    nonfinite_value,
    invalid_parameter,
};

const char* to_string(ValidationCode code);

/// Malformed input data. Carries the 1-based line/column of the first violation
/// when the data came from a file (0 when unknown).
class ValidationError : public Error {
public:
    ValidationError(ValidationCode code, const std::string& what, std::size_t line = 0,
                    std::size_t column = 0);

    ValidationCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    ValidationCode code_;
    std::size_t line_;
    std::size_t column_;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The grid builder hit its grid cap before every ball found a comparable cube.
class InsufficientAdjacency : public Error {
public:
    InsufficientAdjacency(const std::string& what, std::size_t center, double radius)
        : Error(what), center_(center), radius_(radius) {}

    std::size_t center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }

private:
    std::size_t center_;
    double radius_;
};

/// No cube two levels up contains all same-level neighbours of a cube.
class GdpMissing : public Error {
public:
    using Error::Error;
};

/// A dyadic grid violates one of the exact cube axioms.
class AxiomViolation : public Error {
public:
    using Error::Error;
};

/// The Luxemburg solver failed to bracket or converge.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace shtlab
