#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trackscore {

/// Operands disagree on width, depth or path dimension.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument is outside the domain of an operation (non-invertible tensor,
/// non-unital action, rho outside [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input data. Carries the 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace trackscore
