#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symporder {

// Malformed arguments: odd dimensions, shape mismatches, non-symplectic input.
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the domain where a formula holds
// (non-dominant element, Maslov index below the redistribution threshold, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Floating point breakdown: singular sample, failed decomposition.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string &what, std::ptrdiff_t index = -1)
        : std::runtime_error(index >= 0 ? what + " (sample " + std::to_string(index) + ")" : what), index_(index) {}

    [[nodiscard]] std::ptrdiff_t index() const noexcept { return index_; }

  private:
    std::ptrdiff_t index_;
};

// Grid refinement hit its cap before the argument increments became resolvable.
class ResolutionError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

}  // namespace symporder
