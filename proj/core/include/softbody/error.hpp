#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace softbody {

enum class ErrorCode {
  InvalidArgument,
  UnknownObject,
  UnknownParticle,
  SelfLink,
  OpenBoundary,
  StaleHandle,
  NumericalBlowup,
  EmptyWorld,
  NotRunning,
  NoActiveDrag,
  SameDimension,
  UnsupportedDimension,
  AlreadyRecording,
  NotRecording,
  NothingToSave,
  CapacityExceeded,
  IoError,
  ParseError,
  NotReciprocal,
  NonPositiveEntry,
  NotSquare,
  LabelMismatch,
  DecodeError,
  BindError,
  ConfigError,
};

/// Stable snake_case name, used on the wire and in diagnostics.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace softbody
