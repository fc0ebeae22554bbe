#ifndef TVVAR_ERRORS_HPP_
#define TVVAR_ERRORS_HPP_

#include <stdexcept>

namespace tvvar {

// Malformed or unreadable input data (files, non-finite values).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that cannot produce a meaningful result for valid-looking
// input: singular systems, infeasible programs, empty kernel windows.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when operand shapes are incompatible.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a pivot falls below the singularity cutoff.
class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Raised when a NaN or infinity reaches a public operation.
class NonFiniteError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace tvvar

#endif  // TVVAR_ERRORS_HPP_
