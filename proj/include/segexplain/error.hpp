#pragma once

#include <stdexcept>
#include <string>

namespace segexplain {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or run configuration. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable input data. Maps to CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Raised by the throwing statistics entry points.
class StatsError : public Error {
 public:
  enum class Kind { kInsufficientSample, kZeroVariance };

  StatsError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace segexplain
