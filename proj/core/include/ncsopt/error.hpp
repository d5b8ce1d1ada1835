#pragma once

#include <stdexcept>
#include <string>

namespace ncsopt {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation (non-square, mismatched blocks).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel failed to converge or produced non-finite values.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. asymmetric
/// matrix passed to a symmetric solver).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-facing configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Actuator buffer asked to read past its packet depth.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

/// Unknown named entity (built-in plant, trade-off, ...).
class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncsopt
