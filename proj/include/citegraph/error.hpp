#pragma once

#include <stdexcept>
#include <string>

namespace citegraph {

// Bad user input: malformed config, unreadable file, out-of-range ids.
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation produced NaN/Inf where the contract forbids it.
// The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace citegraph
