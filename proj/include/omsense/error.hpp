#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omsense {

/// Input outside the mathematical domain of an operation (negative power, zero wavelength, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters that are valid physics but outside what the model implements (κ₁ ≠ κ₂).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Misuse of an API, e.g. an empty scan range or a non-fixed-point passed to a stability test.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The steady-state problem has no physical (real, non-negative) solution.
class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scan produced a flat response, so a width or optimum is undefined.
class UndefinedResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration blew up. Carries the last finite state norm and time.
class Diverged : public std::runtime_error {
 public:
  Diverged(const std::string& what, double time, double norm)
      : std::runtime_error(what), time_(time), norm_(norm) {}
  double time() const noexcept { return time_; }
  double norm() const noexcept { return norm_; }

 private:
  double time_;
  double norm_;
};

/// Adaptive step collapsed or the step budget ran out.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// settle() hit its time cutoff before the residual criterion was met.
class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Failure inside a sweep, tagged with the step at which it happened.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace omsense
