#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace compactfd {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid with fewer than two intervals or non-positive length.
class DegenerateDomain : public Error {
 public:
  using Error::Error;
};

/// Two grid functions whose nodes do not coincide as required.
class IncompatibleGrids : public Error {
 public:
  using Error::Error;
};

/// Linearized correction denominator (or 2x2 block) too close to singular.
/// Usually means the time step is too large for the nonlinearity.
class SingularLinearization : public Error {
 public:
  using Error::Error;
};

/// Relaxation hit its iteration cap before the stopping test was met.
class NonConvergence : public Error {
 public:
  NonConvergence(std::size_t step, std::size_t iterations, double max_correction);

  std::size_t step() const { return step_; }
  std::size_t iterations() const { return iterations_; }
  double max_correction() const { return max_correction_; }

 private:
  std::size_t step_;
  std::size_t iterations_;
  double max_correction_;
};

/// Invalid configuration value or unknown key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace compactfd
