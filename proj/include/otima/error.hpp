#pragma once

#include <stdexcept>
#include <string>

namespace otima {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (negative order, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed its own convergence diagnostics.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The cluster does not fit the sub-period grating model (R >= d).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration file or command-line value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace otima
