#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracperim {

enum class ErrorCode {
  InvalidParameter,
  EmptySet,
  DomainTooSmall,
  IncompatibleGrid,
  Quantization,
  SameCell,
  TailAccuracy,
  SingularTail,
  MissingHalo,
  SingularTrace,
  CalibrationFailed,
  PreconditionViolation,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the verification suite can report documented errors uniformly.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fracperim
