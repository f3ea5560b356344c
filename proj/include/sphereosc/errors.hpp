#pragma once

#include <stdexcept>
#include <string>

namespace sphereosc {

/// Invalid user input: configuration fields, preconditions on parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gauss-Hermite rule too short for the polynomial exactness floor.
class QuadratureOrderError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A numerical result violated one of its invariants.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HermiticityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Simultaneous diagonalization of H0 and Lz failed (symmetry broken by assembly).
class SymmetryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NormDriftError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sphereosc
