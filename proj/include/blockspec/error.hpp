#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blockspec {

enum class ErrorCode {
  RhoInvalid,
  EntryOutOfRange,
  SymmetryViolation,
  NotIdentifiable,
  DegenerateFactors,
  DimensionError,
  EmptyInput,
  OmegaOutOfRange,
  XiOutOfRange,
  TooLargeForExact,
  NoKFound,
  ThetaOutOfRange,
  LengthMismatch,
  NotOrthonormal,
  ConfigError,
  ParseError,
  IoError,
  LapackFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure surfaces as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blockspec
