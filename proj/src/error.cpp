#include "fracperim/error.hpp"

namespace fracperim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::EmptySet: return "empty-set";
    case ErrorCode::DomainTooSmall: return "domain-too-small";
    case ErrorCode::IncompatibleGrid: return "incompatible-grid";
    case ErrorCode::Quantization: return "quantization";
    case ErrorCode::SameCell: return "same-cell";
    case ErrorCode::TailAccuracy: return "tail-accuracy";
    case ErrorCode::SingularTail: return "singular-tail";
    case ErrorCode::MissingHalo: return "missing-halo";
    case ErrorCode::SingularTrace: return "singular-trace";
    case ErrorCode::CalibrationFailed: return "calibration-failed";
    case ErrorCode::PreconditionViolation: return "precondition-violation";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace fracperim
