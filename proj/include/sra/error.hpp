#pragma once

#include <stdexcept>
#include <string>

namespace sra {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, bad hyperparameters, malformed pool strings, out-of-range values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input files and datasets that violate their invariants.
class InputError : public Error {
 public:
  using Error::Error;
};

// Data that is well formed but cannot support the requested computation:
// single-class label vectors, splits that leave an empty or one-class half.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// A trainer produced a non-finite loss or parameter.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sra
