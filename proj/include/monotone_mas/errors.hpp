#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mas {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual);
};

/// Argument outside the mathematical domain of an operation (e.g. log of 0).
class DomainError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The map produced a negative component; carries the offending index and value.
class PositivityViolation : public Error {
public:
    PositivityViolation(std::size_t index, double value);

    std::size_t index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

private:
    std::size_t index_;
    double value_;
};

/// Evaluation failed (non-finite output, wrong output size, or a failure
/// at a given iteration step).
class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string& what, std::optional<std::size_t> step = std::nullopt);

    std::optional<std::size_t> step() const noexcept { return step_; }

private:
    std::optional<std::size_t> step_;
};

}  // namespace mas
