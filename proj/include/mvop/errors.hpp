#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Integer arithmetic would wrap around.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Malformed recurrence file.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Point-cloud file could not be ingested. line() is 1-based, 0 when the
/// failure is not tied to a line (missing or empty file).
class IngestionError : public Error {
 public:
  IngestionError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A numerical procedure broke down. Carries the polynomial degree at which the
/// failure was detected and, where meaningful, the 0-based coordinate index.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int degree, int coordinate = -1)
      : Error(annotate(what, degree, coordinate)), degree_(degree), coordinate_(coordinate) {}
  int degree() const { return degree_; }
  int coordinate() const { return coordinate_; }

 private:
  static std::string annotate(const std::string& what, int degree, int coordinate) {
    std::string s = what + " [degree " + std::to_string(degree);
    if (coordinate >= 0) s += ", coordinate " + std::to_string(coordinate);
    return s + "]";
  }
  int degree_;
  int coordinate_;
};

/// Univariate Stieltjes hit a vanishing recurrence width.
class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Cholesky factorisation of a Gram matrix broke down.
class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A matrix that must have full rank (B_{n,i}, Lambda_n, T_{n,i,i}, kernel of K) does not.
class RankError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A matrix that must be positive semidefinite is indefinite beyond roundoff.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The d = 3 orthogonal completion failed its orthogonality check.
class ClosureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mvop
