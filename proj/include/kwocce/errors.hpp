#pragma once

#include <stdexcept>
#include <string>

namespace kwocce {

// Malformed config records, dataset lines, or model files.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures (unreadable/unwritable paths).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values where finite ones are required, e.g. diverged training.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kwocce
