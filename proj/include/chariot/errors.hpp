#pragma once

#include <stdexcept>
#include <string>

namespace chariot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: unknown names, non-positive sizes, malformed paths.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A point, path or region left the chart domain (or hit a degenerate metric).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations; `residual` is the last residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace chariot
