#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace persist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidNode : public Error {
public:
    using Error::Error;
};

/// A parameter lies outside the domain where a formula or certificate applies.
class DomainError : public Error {
public:
    using Error::Error;
};

class ClassificationError : public Error {
public:
    using Error::Error;
};

/// Row of the discrete update matrix does not sum to one.
class RowSumViolation : public Error {
public:
    RowSumViolation(std::size_t node, double time, double residual)
        : Error("row sum violation at node " + std::to_string(node) + ", t=" + std::to_string(time) +
                ": |sum - 1| = " + std::to_string(residual)),
          node(node), time(time), residual(residual) {}

    std::size_t node;
    double time;
    double residual;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class NotSummable : public Error {
public:
    using Error::Error;
};

class TrajectoryTooShort : public Error {
public:
    using Error::Error;
};

/// Scenario text could not be parsed. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {}

    std::size_t line;
};

/// Scenario parsed but is semantically invalid; `path` names the offending field.
class ValidationError : public Error {
public:
    ValidationError(const std::string& path, const std::string& msg)
        : Error(path + ": " + msg), path(path) {}

    std::string path;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace persist
