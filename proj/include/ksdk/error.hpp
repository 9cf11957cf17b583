#pragma once

#include <stdexcept>
#include <string>

namespace ksdk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input field is not Hermitian although a real field was required.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operator (e.g. negative time).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Resolution or component count mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite coefficients produced by a time step.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Initial data or configuration violates an operation's preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A density dropped below the positivity floor where a square root was needed.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Configuration parsing / validation failure. The message names the key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ksdk
