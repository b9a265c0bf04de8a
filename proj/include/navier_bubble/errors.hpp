#pragma once

#include <stdexcept>
#include <string>

namespace navier_bubble {

// Invalid arguments: dimension, radii, descriptors. Maps to CLI exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : UsageError(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class PositivityViolation : public UsageError {
 public:
  using UsageError::UsageError;
};

// Numerical failures. Maps to CLI exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureNonconvergence : public NumericalError {
 public:
  QuadratureNonconvergence(const std::string& what, double best_estimate, double error_estimate)
      : NumericalError(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
  double best_estimate() const { return best_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

class SeriesTruncationError : public NumericalError {
 public:
  SeriesTruncationError(const std::string& what, int modes) : NumericalError(what), modes_(modes) {}
  int modes() const { return modes_; }

 private:
  int modes_;
};

class StepUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CoincidentPoints : public UsageError {
 public:
  using UsageError::UsageError;
};

class CorrectionNotInitialized : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConstraintViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IndefiniteForm : public NumericalError {
 public:
  IndefiniteForm(const std::string& what, double min_eigenvalue)
      : NumericalError(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class NoClearPeak : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace navier_bubble
