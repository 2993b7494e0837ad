#pragma once

#include <stdexcept>
#include <string>

namespace gpcq {

struct InvalidExponentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidParametersError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoRealRootsError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericalFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntervalError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InsufficientSamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InconclusiveOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error("config error at key '" + key + "': " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace gpcq
