#pragma once

#include <stdexcept>
#include <string>

namespace xxtsi {

// Bad inputs: out-of-range parameters, malformed specs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Something numerical went wrong (NaN, eigenvalues out of window,
// imaginary residue on a real correlator, ...).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point sits on a phase boundary; Fermi-point count is ill defined.
class DegenerateClassification : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Truncated SSP sum can't be certified at the requested radius.
class TailBoundViolation : public std::runtime_error {
 public:
  TailBoundViolation(const std::string& what, double bound, int radius)
      : std::runtime_error(what), bound_(bound), radius_(radius) {}
  double bound() const { return bound_; }
  int radius() const { return radius_; }

 private:
  double bound_;
  int radius_;
};

}  // namespace xxtsi
