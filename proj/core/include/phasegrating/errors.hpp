#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phasegrating {

// Base for every failure that comes from a numerical routine rather than bad input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double t, std::vector<double> last_state)
      : NumericalError(what), t_(t), last_state_(std::move(last_state)) {}

  double time() const noexcept { return t_; }
  const std::vector<double>& last_state() const noexcept { return last_state_; }

 private:
  double t_;
  std::vector<double> last_state_;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : NumericalError(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// Raised when the initial-offset -> exit-position map folds over (rays cross).
class CausticError : public NumericalError {
 public:
  CausticError(const std::string& what, double x_initial)
      : NumericalError(what), x_initial_(x_initial) {}

  double x_initial() const noexcept { return x_initial_; }

 private:
  double x_initial_;
};

// Mode basis too small: population leaked into the outermost retained order.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double leakage)
      : NumericalError(what), leakage_(leakage) {}

  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

}  // namespace phasegrating
