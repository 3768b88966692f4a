#pragma once

#include <stdexcept>
#include <string>

namespace snakelab {

/// Structural validation failed (bad adjacency, broken automorphism family,
/// malformed serialized input, ...). The message names the offending object.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested exact computation exceeds a hard size cap or configured budget.
/// The message states the computed size and the limit it tripped.
class SizeLimitError : public std::runtime_error {
public:
  explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace snakelab
