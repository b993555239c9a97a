#pragma once

#include <stdexcept>
#include <string>

namespace actlab {

// Contract violations on inputs (bad extents, nonpositive durations, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-posed request that cannot be carried out numerically.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroMassError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GridMismatchError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class AliasingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UndersamplingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormDriftError : public NumericalError {
 public:
  NormDriftError(const std::string& what, int step, double norm)
      : NumericalError(what), step_(step), norm_(norm) {}
  int step() const { return step_; }
  double norm() const { return norm_; }

 private:
  int step_;
  double norm_;
};

class CausticError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace actlab
