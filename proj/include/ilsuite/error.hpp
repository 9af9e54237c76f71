#pragma once

#include <stdexcept>
#include <string>

namespace ilsuite {

/// Invalid configuration, arguments, or preconditions. CLI exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values in losses, gradients, or parameters. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed dataset or policy file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ilsuite
