#pragma once

#include <stdexcept>
#include <string>

namespace kaczmarz {

/// Base class for recoverable errors raised by this library.
/// Programming errors (broken contracts) throw std::logic_error instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch between a matrix and a vector, or two vectors.
struct ShapeError : Error {
    using Error::Error;
};

/// Invalid user-supplied parameter (theta out of range, zero tolerance, ...).
struct ParamError : Error {
    using Error::Error;
};

/// Input data failed validation (zero row, non-finite entry, malformed CSR).
struct ValidationError : Error {
    using Error::Error;
};

/// Matrix Market content could not be parsed. Carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& msg, long line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    long line;
};

/// The requested quantity is undefined for this input (e.g. single-row bounds).
struct DomainError : Error {
    using Error::Error;
};

/// The right-hand side is not in the range of the matrix.
struct InconsistentSystemError : Error {
    using Error::Error;
};

/// Filesystem read or write failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace kaczmarz
