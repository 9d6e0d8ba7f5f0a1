#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyvl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (window, admissibility, exponent range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value outside the achievable range of a monotone map (bracketing failure).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A weight power that is not integrable at the origin.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

/// Quadrature that exhausted its subdivision budget. Carries the best estimate.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Limit extrapolation on a sequence that is not settling. Carries the raw sequence.
class ExtrapolationError : public Error {
 public:
  ExtrapolationError(const std::string& what, std::vector<double> raw)
      : Error(what), raw_(std::move(raw)) {}

  const std::vector<double>& raw_values() const noexcept { return raw_; }

 private:
  std::vector<double> raw_;
};

/// Malformed or invalid configuration. `line` is 0 when the error is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0) : Error(what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace hardyvl
