#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace orbiton {

enum class ErrorKind {
  JacobiViolation,
  AntisymmetryViolation,
  DimensionMismatch,
  NotSolvable,
  NotMD4,
  DegenerateJordan,
  UnknownFamily,
  StratumMismatch,
  ShapeMismatch,
  SingularLoop,
  NonIntegerResult,
  UnknownSpace,
  BadParams,
  GridTooCoarse,
  GapTooSmall,
  AsymptoticMismatch,
  IOError,
  ParseError,
};

const char* error_kind_name(ErrorKind kind);

// Every failure raised by the library. `value` carries the offending
// residual or raw number when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail,
        double value = std::numeric_limits<double>::quiet_NaN());

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  double value_;
};

}  // namespace orbiton
