#pragma once

#include <string>
#include <string_view>

#include "softbody/session.hpp"

namespace softbody::protocol {

/// Parses a client JSON message into a session command. Throws DecodeError for malformed
/// JSON, an unknown "type", missing fields or non-finite coordinates.
Command decode_client(std::string_view message);

/// Inverse of `decode_client`.
std::string encode_client(const Command& command);

/// `{"type":"frame", ...}`. Springs are included when `include_topology` is set.
std::string encode_frame(const FrameSnapshot& snapshot, bool include_topology);

/// `save_prompt`, `saved` or `error`, depending on the event.
std::string encode_event(const SessionEvent& event);

std::string encode_error(std::string_view code, std::string_view message);

/// `{"type":"state"}` summary of mode, integrator, dimension and recording status.
std::string encode_state(const FrameSnapshot& snapshot);

std::string_view nudge_name(NudgeDirection direction);

}  // namespace softbody::protocol
