#pragma once

#include <stdexcept>
#include <string>

namespace krylovlab {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  Schema,
  SymmetryViolation,
  EmptySector,
  NonHermitian,
  InsufficientData,
  ResourceExhausted,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library. `detail` carries the JSON pointer for
// schema errors and the symmetry name for symmetry violations.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string detail = {})
      : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace krylovlab
