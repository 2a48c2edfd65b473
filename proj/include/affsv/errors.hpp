#pragma once

#include <stdexcept>
#include <string>

namespace affsv {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite input, negative time, cone violations of checked constructors.
class DomainError : public Error {
 public:
  using Error::Error;
};

// exp() overflow in the jump kernels.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Eigensolver failure, singular resolvent.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Riccati step whose PSD projection moved the state by more than the tolerance.
class StepRejected : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Thinning majorant could not be kept above the true intensity.
class MajorantOverflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void require_same_dim(long a, long b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace affsv
