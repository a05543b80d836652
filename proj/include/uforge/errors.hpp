#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An operand violates a documented precondition (non-Hermitian input,
/// dimension mismatch, ill-formed density matrix, ...).
class InvalidOperandError : public Error {
public:
    using Error::Error;
};

/// A requested dimension is outside the supported range.
class InvalidDimensionError : public Error {
public:
    using Error::Error;
};

/// A scalar argument is out of range (non-positive repetition count, ...).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// A pulse or vector index is out of range.
class InvalidIndexError : public Error {
public:
    using Error::Error;
};

/// A sequence does not have the alternating canonical form required here.
class InvalidFormError : public Error {
public:
    using Error::Error;
};

/// The principal matrix logarithm is undefined: an eigenvalue sits on the
/// negative real axis within tolerance.
class BranchCutError : public Error {
public:
    using Error::Error;
};

/// Text could not be parsed; `position` is the offending character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A file could not be read or has malformed content; `line` is 1-based
/// (0 when the problem is not tied to a specific line).
class IoError : public Error {
public:
    IoError(const std::string& what, std::size_t line = 0)
        : Error(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace uforge
