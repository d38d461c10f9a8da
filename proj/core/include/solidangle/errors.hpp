#pragma once

#include <stdexcept>
#include <string>

namespace solidangle {

// Base for every numerical/domain failure raised by the library. The CLI maps
// these to exit code 2; ConfigError maps to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation point too close to M (or to a mesh) for the requested method.
class ProximityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// No candidate pole direction clears the separation margin.
class PoleNotFoundError : public Error {
 public:
  using Error::Error;
};

// Iterative method hit its cap without meeting the tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed input file or command-line configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace solidangle
