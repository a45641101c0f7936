// errors.hpp: exception hierarchy shared by every module.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad truncation dimension (e.g. a ladder operator on fewer than two levels).
struct DimensionError : Error {
    using Error::Error;
};

// Subsystem naming problems: collisions, unknown names, mismatched spaces.
struct LabelError : Error {
    using Error::Error;
};

// A precondition on an argument's structure was violated (non-hermitian input, ...).
struct ContractError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

// Refusal to build a matrix beyond the dense size guard.
struct SizeError : Error {
    using Error::Error;
};

// Nonlinear solver did not converge; carries the last iterate.
struct SolverError : Error {
    SolverError(const std::string& what, double alpha, double s, double residual, int iterations)
        : Error(what), last_alpha(alpha), last_s(s), last_residual(residual), iterations(iterations) {}
    double last_alpha;
    double last_s;
    double last_residual;
    int iterations;
};

// Configuration parse/validation failure. line == 0 means "not tied to a line".
struct ConfigError : Error {
    ConfigError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
    std::size_t line;
};

} // namespace dsc
