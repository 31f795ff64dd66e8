#include "hilbert/error.hpp"

namespace hilbert {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::EuclideanFailure: return "EuclideanFailure";
    case ErrorCode::NotTotallyPositive: return "NotTotallyPositive";
    case ErrorCode::ZeroGenerator: return "ZeroGenerator";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::NoGenerator: return "NoGenerator";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::MissingPrime: return "MissingPrime";
    case ErrorCode::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorCode::AbscissaViolation: return "AbscissaViolation";
    case ErrorCode::NotMultiplicative: return "NotMultiplicative";
    case ErrorCode::NotUpperHalfPlane: return "NotUpperHalfPlane";
    case ErrorCode::IncompatibleLevels: return "IncompatibleLevels";
    case ErrorCode::NotInGroup: return "NotInGroup";
    case ErrorCode::BadWeight: return "BadWeight";
    case ErrorCode::BadLevel: return "BadLevel";
    case ErrorCode::ArgumentTooLarge: return "ArgumentTooLarge";
    case ErrorCode::ZeroModulus: return "ZeroModulus";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::CompletionFailure: return "CompletionFailure";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::RegionViolation: return "RegionViolation";
    case ErrorCode::NonParallelN: return "NonParallelN";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace hilbert
