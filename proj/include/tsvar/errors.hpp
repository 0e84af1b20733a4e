#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A query point or index lies outside the object it was asked about.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operation needs at least two points (or one interior point) and did not get them.
class DegenerateScaleError : public Error {
public:
    using Error::Error;
};

/// Shapes disagree: dimension, grid length, or grid points.
class DimensionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset))
        , message_(what)
        , offset_(offset)
    {}

    std::size_t offset() const noexcept { return offset_; }
    /// The message without the offset suffix.
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t offset_;
};

/// Arithmetic failure while evaluating an integrand; carries the time at which it happened.
class EvalError : public Error {
public:
    EvalError(const std::string& what, double t)
        : Error(what + " at t=" + std::to_string(t))
        , t_(t)
    {}

    double t() const noexcept { return t_; }

private:
    double t_;
};

/// The brute-force search was asked to enumerate more lattice points than allowed.
class SearchSpaceError : public Error {
public:
    using Error::Error;
};

} // namespace tsvar
