#pragma once

#include <stdexcept>
#include <string>

namespace photonstats {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (odd dimension,
/// negative repetition, non-unitary interferometer, divergent generating
/// function, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A size guard on an exponential-cost routine was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A Gaussian state failed a physicality check. The message names the
/// violated invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A result failed an internal consistency check, e.g. a photon-number
/// moment with a non-negligible imaginary part.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document (state file, experiment config, CSV).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace photonstats
