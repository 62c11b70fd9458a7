#pragma once

#include <stdexcept>
#include <string>

namespace crossnet {

/// Input file or record that failed to parse; message carries the line number
/// when one is known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Arguments or data that violate an operation contract.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested configuration that cannot be satisfied (CLI maps this to exit 2).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crossnet
