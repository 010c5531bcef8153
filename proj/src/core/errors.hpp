#pragma once

#include <stdexcept>
#include <string>

namespace dg3pd {

// Validation problems use std::invalid_argument directly.

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dg3pd
