#include "softbody/error.hpp"

namespace softbody {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::UnknownObject: return "unknown_object";
    case ErrorCode::UnknownParticle: return "unknown_particle";
    case ErrorCode::SelfLink: return "self_link";
    case ErrorCode::OpenBoundary: return "open_boundary";
    case ErrorCode::StaleHandle: return "stale_handle";
    case ErrorCode::NumericalBlowup: return "numerical_blowup";
    case ErrorCode::EmptyWorld: return "empty_world";
    case ErrorCode::NotRunning: return "not_running";
    case ErrorCode::NoActiveDrag: return "no_active_drag";
    case ErrorCode::SameDimension: return "same_dimension";
    case ErrorCode::UnsupportedDimension: return "unsupported_dimension";
    case ErrorCode::AlreadyRecording: return "already_recording";
    case ErrorCode::NotRecording: return "not_recording";
    case ErrorCode::NothingToSave: return "nothing_to_save";
    case ErrorCode::CapacityExceeded: return "capacity_exceeded";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::NotReciprocal: return "not_reciprocal";
    case ErrorCode::NonPositiveEntry: return "non_positive_entry";
    case ErrorCode::NotSquare: return "not_square";
    case ErrorCode::LabelMismatch: return "label_mismatch";
    case ErrorCode::DecodeError: return "bad_message";
    case ErrorCode::BindError: return "bind_error";
    case ErrorCode::ConfigError: return "config_error";
  }
  return "unknown";
}

}  // namespace softbody
