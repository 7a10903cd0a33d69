#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace resolab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (k = 0 for T/R, probes beyond R/4, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed potential or zero-set input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A numerical method failed to reach its tolerance within budget.
class NonconvergenceError : public Error {
 public:
  using Error::Error;
};

/// ODE step-size underflow. Carries where it happened.
class SolverError : public NonconvergenceError {
 public:
  SolverError(const std::string& what, double x, std::complex<double> k)
      : NonconvergenceError(what), x_(x), k_(k) {}
  double x() const noexcept { return x_; }
  std::complex<double> k() const noexcept { return k_; }

 private:
  double x_;
  std::complex<double> k_;
};

/// A zero of the integrand's function lies on (or too close to) a contour.
class ZeroOnContourError : public NonconvergenceError {
 public:
  using NonconvergenceError::NonconvergenceError;
};

/// A computed quantity contradicts a structural fact (non-axis eigenvalue,
/// double zero of omega at the origin, omega vanishing on the real line, ...).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The logarithmic derivative at the midpoint is undefined (psi vanishes there).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A check cannot be run for this input (missing smoothness metadata, q outside Q1...).
class InapplicableError : public Error {
 public:
  using Error::Error;
};

}  // namespace resolab
