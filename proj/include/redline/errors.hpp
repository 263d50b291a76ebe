#pragma once

#include <stdexcept>
#include <string>

namespace redline {

// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Maps to CLI exit code 2 (transport failures, remote errors).
class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

// Operation requested from a backend that does not support it,
// e.g. instruct() on a completion-only model.
class CapabilityError : public ValidationError {
 public:
  explicit CapabilityError(const std::string& what) : ValidationError(what) {}
};

// Input text too short for the selected detector.
class InsufficientLengthError : public ValidationError {
 public:
  explicit InsufficientLengthError(const std::string& what) : ValidationError(what) {}
};

}  // namespace redline
