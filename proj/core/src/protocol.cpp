#include "softbody/protocol.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace softbody::protocol {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void decode_error(const std::string& what) { throw Error(ErrorCode::DecodeError, what); }

double finite_number(const json& msg, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!msg.contains(key)) {
    if (fallback) return *fallback;
    decode_error(std::string("missing field '") + key + "'");
  }
  const json& v = msg.at(key);
  if (!v.is_number()) decode_error(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) decode_error(std::string("field '") + key + "' must be finite");
  return d;
}

int integer(const json& msg, const char* key) {
  if (!msg.contains(key) || !msg.at(key).is_number_integer()) {
    decode_error(std::string("field '") + key + "' must be an integer");
  }
  return msg.at(key).get<int>();
}

std::string text(const json& msg, const char* key) {
  if (!msg.contains(key) || !msg.at(key).is_string()) {
    decode_error(std::string("field '") + key + "' must be a string");
  }
  return msg.at(key).get<std::string>();
}

std::optional<std::string> optional_text(const json& msg, const char* key) {
  if (!msg.contains(key) || msg.at(key).is_null()) return std::nullopt;
  return text(msg, key);
}

Vec3 point(const json& msg) {
  return {finite_number(msg, "x"), finite_number(msg, "y"), finite_number(msg, "z", 0.0)};
}

json point_json(std::string_view type, const Vec3& p) {
  return {{"type", type}, {"x", p.x}, {"y", p.y}, {"z", p.z}};
}

}  // namespace

std::string_view nudge_name(NudgeDirection direction) {
  switch (direction) {
    case NudgeDirection::Up: return "up";
    case NudgeDirection::Down: return "down";
    case NudgeDirection::Left: return "left";
    case NudgeDirection::Right: return "right";
  }
  return "up";
}

Command decode_client(std::string_view message) {
  json msg;
  try {
    msg = json::parse(message);
  } catch (const json::parse_error& e) {
    decode_error(std::string("malformed JSON: ") + e.what());
  }
  if (!msg.is_object()) decode_error("message must be a JSON object");
  const std::string type = text(msg, "type");

  if (type == "start") return command::StartSimulation{};
  if (type == "reset") return command::Reset{};
  if (type == "drag_start") return command::DragStart{point(msg)};
  if (type == "drag_move") return command::DragMove{point(msg)};
  if (type == "drag_end") return command::DragEnd{};
  if (type == "start_save") return command::StartSave{};
  if (type == "stop_save") return command::StopSave{};
  if (type == "nudge") {
    const std::string dir = text(msg, "dir");
    for (auto d : {NudgeDirection::Up, NudgeDirection::Down, NudgeDirection::Left, NudgeDirection::Right}) {
      if (dir == nudge_name(d)) return command::Nudge{d};
    }
    decode_error("nudge dir must be up, down, left or right");
  }
  if (type == "set_integrator") {
    const auto kind = parse_integrator(text(msg, "kind"));
    if (!kind) decode_error("integrator kind must be euler, midpoint or rk4");
    return command::SetIntegrator{*kind};
  }
  if (type == "set_dimension") {
    const auto d = dimension_from_int(integer(msg, "d"));
    if (!d) decode_error("dimension must be 1, 2 or 3");
    return command::SetDimension{*d};
  }
  if (type == "link") {
    command::LinkObjects l;
    l.object_a = integer(msg, "a");
    l.particle_a = integer(msg, "pa");
    l.object_b = integer(msg, "b");
    l.particle_b = integer(msg, "pb");
    l.stiffness = finite_number(msg, "stiffness", l.stiffness);
    l.damping = finite_number(msg, "damping", l.damping);
    return l;
  }
  if (type == "save_confirm") return command::SaveConfirm{optional_text(msg, "name"), optional_text(msg, "dir")};
  decode_error("unknown message type '" + type + "'");
}

std::string encode_client(const Command& command) {
  const json msg = std::visit(
      Overloaded{
          [](const command::StartSimulation&) { return json{{"type", "start"}}; },
          [](const command::Reset&) { return json{{"type", "reset"}}; },
          [](const command::DragStart& d) { return point_json("drag_start", d.point); },
          [](const command::DragMove& d) { return point_json("drag_move", d.point); },
          [](const command::DragEnd&) { return json{{"type", "drag_end"}}; },
          [](const command::StartSave&) { return json{{"type", "start_save"}}; },
          [](const command::StopSave&) { return json{{"type", "stop_save"}}; },
          [](const command::Nudge& n) { return json{{"type", "nudge"}, {"dir", nudge_name(n.direction)}}; },
          [](const command::SetIntegrator& s) {
            return json{{"type", "set_integrator"}, {"kind", integrator_name(s.kind)}};
          },
          [](const command::SetDimension& s) {
            return json{{"type", "set_dimension"}, {"d", static_cast<int>(s.dimension)}};
          },
          [](const command::LinkObjects& l) {
            return json{{"type", "link"},           {"a", l.object_a},
                        {"pa", l.particle_a},       {"b", l.object_b},
                        {"pb", l.particle_b},       {"stiffness", l.stiffness},
                        {"damping", l.damping}};
          },
          [](const command::SaveConfirm& s) {
            json j{{"type", "save_confirm"}};
            if (s.name) j["name"] = *s.name;
            if (s.dir) j["dir"] = *s.dir;
            return j;
          },
      },
      command);
  return msg.dump();
}

std::string encode_frame(const FrameSnapshot& s, bool include_topology) {
  json objects = json::array();
  for (const auto& obj : s.objects) {
    json particles = json::array();
    for (const auto& p : obj.particles) {
      particles.push_back({{"id", p.id},
                           {"px", p.position.x},
                           {"py", p.position.y},
                           {"pz", p.position.z},
                           {"vx", p.velocity.x},
                           {"vy", p.velocity.y},
                           {"vz", p.velocity.z}});
    }
    json o{{"id", obj.id}, {"particles", std::move(particles)}};
    if (include_topology) o["springs"] = obj.springs;
    objects.push_back(std::move(o));
  }
  json frame{{"type", "frame"},
             {"t", s.t},
             {"objects", std::move(objects)},
             {"drag_force", s.drag_force},
             {"topology", include_topology}};
  if (s.drag) {
    frame["drag"] = {{"object", s.drag->object},
                     {"particle", s.drag->particle},
                     {"target", {s.drag->target.x, s.drag->target.y, s.drag->target.z}}};
  }
  return frame.dump();
}

std::string encode_error(std::string_view code, std::string_view message) {
  return json{{"type", "error"}, {"code", code}, {"message", message}}.dump();
}

std::string encode_event(const SessionEvent& event) {
  return std::visit(Overloaded{
                        [](const ErrorEvent& e) { return encode_error(error_code_name(e.code), e.message); },
                        [](const SavePrompt& p) {
                          return json{{"type", "save_prompt"},
                                      {"default_name", p.default_name},
                                      {"default_dir", p.default_dir.string()},
                                      {"frames", p.frame_count}}
                              .dump();
                        },
                        [](const SavedEvent& s) { return json{{"type", "saved"}, {"path", s.path.string()}}.dump(); },
                    },
                    event);
}

std::string encode_state(const FrameSnapshot& s) {
  return json{{"type", "state"},
              {"mode", mode_name(s.mode)},
              {"integrator", integrator_name(s.integrator)},
              {"dimension", static_cast<int>(s.dimension)},
              {"recording", s.recording},
              {"t", s.t}}
      .dump();
}

}  // namespace softbody::protocol
