#include "monotone_mas/errors.hpp"

#include <fmt/format.h>

namespace mas {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : Error(fmt::format("dimension mismatch: expected {}, got {}", expected, actual)) {}

PositivityViolation::PositivityViolation(std::size_t index, double value)
    : Error(fmt::format("positivity violation: component {} = {}", index + 1, value)),
      index_(index),
      value_(value) {}

EvaluationError::EvaluationError(const std::string& what, std::optional<std::size_t> step)
    : Error(step ? fmt::format("step {}: {}", *step, what) : what), step_(step) {}

}  // namespace mas
