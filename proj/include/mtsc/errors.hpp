#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtsc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// User-facing input problems (bad files, bad configuration). The CLI maps
/// these to exit code 2; anything else is an internal error (exit code 3).
struct UserError : Error {
    using Error::Error;
};

struct ParseError : UserError {
    ParseError(std::size_t line_number, const std::string& what)
        : UserError("parse error at line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    std::size_t line;
};

struct EmptyStreamError : UserError {
    using UserError::UserError;
};

struct ConfigError : UserError {
    using UserError::UserError;
};

struct EvaluationError : UserError {
    using UserError::UserError;
};

/// A quantity that is mathematically undefined for the given input
/// (conductance of a zero-volume set, modularity of an edgeless graph, ...).
struct UndefinedQuantityError : Error {
    using Error::Error;
};

/// Thrown by detectors when a graph has no structure to detect (no edges).
struct NoStructureError : Error {
    using Error::Error;
};

/// The stream is too short to admit any temporal scale.
struct NoValidScaleError : UserError {
    using UserError::UserError;
};

}  // namespace mtsc
