#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zrescale {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. Carries the 0-based character position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A computed value left the representable double range (overflow, NaN).
class NumericRangeError : public Error {
 public:
  using Error::Error;
};

/// An argument fell outside the operation's domain (wrong dimension,
/// point outside the admissible ball, invalid configuration value).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition does not hold; the computation is not attempted.
/// Used by the normalization solver when max phi(1,.) <= 1.
class PreconditionUnmet : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exhausted its iteration budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A zero-free declaration failed its sampling spot-check.
class ZeroFreeViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace zrescale
