#pragma once

#include <stdexcept>
#include <string>

namespace istbench {

// A state or operator failed a physical-validity check (normalization,
// Hermiticity, unitarity, positivity, parameter range).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Operands with incompatible shapes.
class DimensionError : public ValidationError {
 public:
  explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while reading a config or writing results.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace istbench
