#pragma once

#include <stdexcept>
#include <string>

namespace mohardy {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (negative level, q < 1, aperture <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural precondition on the input data does not hold
/// (support not inside a ball, grid mismatch, empty level range, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce an answer
/// (singular Gram system, vanishing growth function on a scan, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mohardy
