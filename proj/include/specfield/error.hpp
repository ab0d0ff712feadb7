#pragma once

#include <stdexcept>
#include <string>

namespace specfield {

/// Bad input: violated precondition, malformed config, out-of-range parameter.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical identity that must hold exactly did not.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// f(lambda) = 0 where a positive spectral density is required.
class DegenerateSpectrumError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace specfield
