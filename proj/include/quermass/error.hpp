#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace quermass {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument or precondition violation (bad k, non-positive radius, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A configuration document failed validation. `key` is the dotted path of the
// offending entry, e.g. "problem.k".
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Floating-point breakdown: NaN, division by a vanishing sigma_k, ...
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace quermass
