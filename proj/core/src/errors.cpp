#include "orbiton/errors.hpp"

namespace orbiton {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::JacobiViolation: return "JacobiViolation";
    case ErrorKind::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSolvable: return "NotSolvable";
    case ErrorKind::NotMD4: return "NotMD4";
    case ErrorKind::DegenerateJordan: return "DegenerateJordan";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::StratumMismatch: return "StratumMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SingularLoop: return "SingularLoop";
    case ErrorKind::NonIntegerResult: return "NonIntegerResult";
    case ErrorKind::UnknownSpace: return "UnknownSpace";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::GapTooSmall: return "GapTooSmall";
    case ErrorKind::AsymptoticMismatch: return "AsymptoticMismatch";
    case ErrorKind::IOError: return "IOError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail, double value)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail),
      value_(value) {}

}  // namespace orbiton
