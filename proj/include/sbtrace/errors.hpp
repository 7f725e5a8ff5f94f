#pragma once

#include <stdexcept>
#include <string>

namespace sbtrace {

/// Degree/word cap exceeded; basis sizes grow fast, so blowing past a cap is
/// always an explicit error rather than a silent allocation.
struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad transform parameters (tau outside the admissible disk, etc).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Matrix shape mismatch between a polynomial evaluation and a group spec.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Missing variable value in a scalar substitution, u-dependence where none is
/// allowed, and similar domain violations.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sbtrace
