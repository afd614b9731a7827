#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace indefsl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed expressions, violated preconditions, inconsistent
/// problem files. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel failed (non-convergence, breakdown, unpaired nonreal
/// eigenvalue). The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Expression text could not be parsed. `position()` is 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(std::string const& what, std::size_t position)
      : ValidationError(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation left the domain of a function (log of nonpositive argument,
/// division by zero, overflow, point outside every piecewise interval).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace indefsl
