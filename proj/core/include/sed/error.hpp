#pragma once

#include <stdexcept>
#include <string>

namespace sed {

// Base for all library errors. `category()` is a stable machine-readable
// token used by the CLI to build "error: <category>: <detail>" lines.
class Error : public std::runtime_error {
public:
  Error(std::string category, const std::string& detail)
      : std::runtime_error(detail), category_(std::move(category)) {}

  const std::string& category() const { return category_; }

private:
  std::string category_;
};

// Malformed or inconsistent input data (bad records, shape mismatches).
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& detail)
      : Error("invalid-input", detail) {}
};

// Unusable configuration (out-of-range parameters, contradictory settings).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& detail)
      : Error("bad-config", detail) {}
};

// Filesystem / serialization failures.
class IoError : public Error {
public:
  explicit IoError(const std::string& detail) : Error("io", detail) {}
};

// Optimization failed (non-finite loss, divergence).
class TrainingError : public Error {
public:
  explicit TrainingError(const std::string& detail)
      : Error("training", detail) {}
};

}  // namespace sed
