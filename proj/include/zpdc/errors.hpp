#pragma once

#include <stdexcept>
#include <string>

namespace zpdc {

/// Configuration rejected; `key()` names the offending field when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// A numerical routine failed to reach its requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_tol)
      : std::runtime_error(what + " (achieved tolerance " +
                           std::to_string(achieved_tol) + ")"),
        achieved_tol_(achieved_tol) {}
  double achieved_tol() const { return achieved_tol_; }

 private:
  double achieved_tol_;
};

} // namespace zpdc
