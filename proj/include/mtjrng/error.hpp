#pragma once

#include <stdexcept>
#include <string>

namespace mtjrng {

// Malformed parameters or configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a stage cannot run on otherwise well-formed input
// (truncated files, too little data, I/O failures).
class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The source does not hold enough min-entropy for the requested output.
class InsufficientEntropy : public StageError {
 public:
  using StageError::StageError;
};

}  // namespace mtjrng
