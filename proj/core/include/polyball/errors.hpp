#pragma once

#include <stdexcept>
#include <string>

namespace polyball {

// Bad model parameters or malformed input data. `pointer` is a JSON pointer
// into the originating document when the input came from a config file.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg, std::string pointer = {})
      : std::runtime_error(msg), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

private:
  std::string pointer_;
};

// Twist data that violates Lambda_{j,i} = Lambda_{i,j}^*, or an intra-block twist.
class ValidationError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Caller misuse: out-of-range indices, mismatched models, degree caps.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A numerical precondition failed (non-member, non-pure, negative defect...).
class RejectionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace polyball
