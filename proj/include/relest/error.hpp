#pragma once

#include <stdexcept>

namespace relest {

/// Bad input: malformed files, violated preconditions, impossible recipes.
/// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (eigensolver did not converge, generator
/// exhausted its retry budget). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relest
