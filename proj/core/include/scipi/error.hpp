#pragma once

#include <stdexcept>
#include <string>

namespace scipi {

// Base class for every error raised by the library. The CLI maps
// InputError and its subclasses to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract arguments (shapes, signs, asymmetry).
class InputError : public Error {
 public:
  using Error::Error;
};

// File parse failure; carries the 1-based line number when known.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, long line);
  long line() const { return line_; }

 private:
  long line_;
};

// The requested feature is deliberately unsupported (e.g. L_p PCA with p <= 2).
class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

// Solver configuration is incomplete or contradictory.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// The objective is not defined at the evaluation point.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Floating-point breakdown: non-finite values, non-PD covariance, collapse.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A verification precondition (e.g. stationarity) does not hold.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double measured);
  double measured() const { return measured_; }

 private:
  double measured_;
};

// Not enough samples / iterations to produce an estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace scipi
