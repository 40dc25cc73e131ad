#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oversmooth {

// Input that violates a documented contract (shape, range, graph invariants).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed text input. Carries the 1-based line number when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : ValidationError(what), line_(0) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A statement whose preconditions do not hold for the given instance.
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Floating-point or solver failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every eigenvalue classified as zero, so no minimal nonzero eigenvalue exists.
class DegenerateSpectrumError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace oversmooth
