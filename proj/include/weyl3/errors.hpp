#pragma once

#include <stdexcept>
#include <string>

namespace weyl3 {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed or inconsistent input (bad parameters, class violations, parse failures).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "validation"; }
};

/// The requested computation needs a representation the input does not have.
class UnsupportedRepresentation : public ValidationError {
 public:
  explicit UnsupportedRepresentation(const std::string& what) : ValidationError(what) {}
  const char* kind() const noexcept override { return "unsupported-representation"; }
};

/// Pointwise evaluation outside the domain or at a declared singular point.
class DomainError : public ValidationError {
 public:
  explicit DomainError(const std::string& what) : ValidationError(what) {}
  const char* kind() const noexcept override { return "domain"; }
};

/// A power of the coefficient is not integrable over the requested segment.
class IntegrabilityError : public ValidationError {
 public:
  explicit IntegrabilityError(const std::string& what) : ValidationError(what) {}
  const char* kind() const noexcept override { return "integrability"; }
};

/// Numerical failure: poles, Stokes lines, non-convergence.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
  const char* kind() const noexcept override { return "numerical"; }
};

class PoleError : public NumericalError {
 public:
  PoleError(const std::string& what, int column, double pivot)
      : NumericalError(what), column_(column), pivot_(pivot) {}
  const char* kind() const noexcept override { return "pole"; }
  int column() const noexcept { return column_; }
  double pivot() const noexcept { return pivot_; }

 private:
  int column_;
  double pivot_;
};

class StokesError : public NumericalError {
 public:
  explicit StokesError(const std::string& what) : NumericalError(what) {}
  const char* kind() const noexcept override { return "stokes-line"; }
};

class BranchError : public NumericalError {
 public:
  explicit BranchError(const std::string& what) : NumericalError(what) {}
  const char* kind() const noexcept override { return "branch-cut"; }
};

/// A zero of the characteristic function lies too close to an integration contour.
class ContourError : public NumericalError {
 public:
  explicit ContourError(const std::string& what) : NumericalError(what) {}
  const char* kind() const noexcept override { return "contour-too-close"; }
};

class ConvergenceError : public NumericalError {
 public:
  explicit ConvergenceError(const std::string& what) : NumericalError(what) {}
  const char* kind() const noexcept override { return "non-convergence"; }
};

}  // namespace weyl3
