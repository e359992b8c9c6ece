#pragma once

#include <stdexcept>
#include <string>

namespace gralp {

/// Arguments or configuration rejected before any numeric work.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric backend failed (e.g. eigensolver non-convergence).
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One of the closed-form linear systems is singular. Carries the smallest
/// singular value of the offending matrix.
class SingularSystem : public std::runtime_error {
public:
    SingularSystem(const std::string& what, double smallest_sv)
        : std::runtime_error(what), smallest_singular_value(smallest_sv) {}

    double smallest_singular_value;
};

/// A diagnostic quantity is undefined for the given inputs
/// (e.g. zero-energy reference coefficients).
class UndefinedMeasure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number and the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, int line, const std::string& field,
               const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": field '" + field +
                             "': " + message),
          file(file), line(line), field(field) {}

    std::string file;
    int line;
    std::string field;
};

} // namespace gralp
