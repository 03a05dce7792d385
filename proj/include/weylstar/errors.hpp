#ifndef WEYLSTAR_ERRORS_HPP
#define WEYLSTAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace weylstar {

enum class ErrorKind {
  // validation
  DimensionMismatch,
  NotSymmetric,
  NotOnSphere,
  ParseError,
  IndexOutOfRange,
  NonQuadraticExponent,
  // singular set
  SingularPoint,
  SingularCos,
  Singular,
  NonInvertibleTransform,
  ProductSingular,
  PathThroughSingularity,
  SingularEncountered,
  // numerics
  NonFinite,
  AmbiguousBranch,
  NoInverseInClass,
  StepUnderflow,
  NumericalFailure,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotOnSphere: return "NotOnSphere";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonQuadraticExponent: return "NonQuadraticExponent";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::SingularCos: return "SingularCos";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NonInvertibleTransform: return "NonInvertibleTransform";
    case ErrorKind::ProductSingular: return "ProductSingular";
    case ErrorKind::PathThroughSingularity: return "PathThroughSingularity";
    case ErrorKind::SingularEncountered: return "SingularEncountered";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::AmbiguousBranch: return "AmbiguousBranch";
    case ErrorKind::NoInverseInClass: return "NoInverseInClass";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

// Coarse grouping used for CLI exit statuses.
enum class ErrorClass { Validation, Singular, Numerical };

inline ErrorClass classify(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotOnSphere:
    case ErrorKind::ParseError:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::NonQuadraticExponent:
      return ErrorClass::Validation;
    case ErrorKind::SingularPoint:
    case ErrorKind::SingularCos:
    case ErrorKind::Singular:
    case ErrorKind::NonInvertibleTransform:
    case ErrorKind::ProductSingular:
    case ErrorKind::PathThroughSingularity:
    case ErrorKind::SingularEncountered:
      return ErrorClass::Singular;
    default:
      return ErrorClass::Numerical;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the byte offset into the input text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::ParseError, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace weylstar

#endif  // WEYLSTAR_ERRORS_HPP
