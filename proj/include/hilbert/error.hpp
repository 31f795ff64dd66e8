#pragma once

#include <stdexcept>
#include <string>

namespace hilbert {

/// Machine-readable failure categories. The CLI prints the name verbatim.
enum class ErrorCode {
  UnsupportedField,
  EuclideanFailure,
  NotTotallyPositive,
  ZeroGenerator,
  NotDivisible,
  NoGenerator,
  NotInvertible,
  DomainError,
  MissingPrime,
  InsufficientTruncation,
  AbscissaViolation,
  NotMultiplicative,
  NotUpperHalfPlane,
  IncompatibleLevels,
  NotInGroup,
  BadWeight,
  BadLevel,
  ArgumentTooLarge,
  ZeroModulus,
  NotConverged,
  CompletionFailure,
  HypothesisViolated,
  RegionViolation,
  NonParallelN,
  CacheCorrupt,
  Usage,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hilbert
