#ifndef PREM_ERRORS_H_
#define PREM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace prem {

// Base of every error raised by the library. The CLI maps the subclasses
// onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand sizes (qubit counts, vector lengths) do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar argument lies outside its admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A constructed object would violate its invariants (non-stochastic
// columns, negative probabilities, malformed file contents).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A matrix that must be inverted is singular or numerically close to it.
class SingularError : public Error {
 public:
  using Error::Error;
};

// The Neumann series was refused because its operator norm is >= 1.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace prem

#endif  // PREM_ERRORS_H_
