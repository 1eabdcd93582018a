#pragma once

#include <stdexcept>
#include <string>

namespace fqc {

// Root of every error the library raises. Each subclass corresponds to one
// failure family so front ends can map them onto distinct exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent user input (bad labels, unnormalized states,
// out-of-range parameters, malformed config documents).
class ConfigError : public Error {
public:
  using Error::Error;
};

class LabelError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class NonUnitaryError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class OutOfRangeError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Numerical breakdown: singular cavity parameters, eigenvalue iteration
// not converging, large negative eigenvalues on a PSD-by-construction product.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

class SingularParametersError : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

// Observed statistics that the imperfection model cannot invert.
class InconsistentObservation : public Error {
public:
  using Error::Error;
};

class NonInvertibleError : public InconsistentObservation {
public:
  using InconsistentObservation::InconsistentObservation;
};

} // namespace fqc
