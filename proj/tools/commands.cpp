#include "commands.hpp"

#include <cmath>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>
#include <nlohmann/json.hpp>

#include "softbody/ahp.hpp"
#include "softbody/error.hpp"
#include "softbody/protocol.hpp"
#include "softbody/scene.hpp"
#include "softbody/server.hpp"
#include "softbody/session.hpp"

namespace softbody::cli {
namespace {

using nlohmann::json;

// Headless runs stamp recordings reproducibly: SOURCE_DATE_EPOCH when set, else the epoch.
std::chrono::system_clock::time_point reproducible_now() {
  long long seconds = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) seconds = std::atoll(env);
  return std::chrono::system_clock::time_point(std::chrono::seconds(seconds));
}

DumpFormat resolve_format(const std::optional<DumpFormat>& explicit_format,
                          const std::optional<std::filesystem::path>& path) {
  if (explicit_format) return *explicit_format;
  if (path && path->extension() == ".csv") return DumpFormat::Csv;
  return DumpFormat::Xml;
}

SceneConfig load_configured_scene(const RunOptions& o) {
  SceneConfig scene = load_scene(o.scene);
  if (o.integrator) scene.integrator = *o.integrator;
  if (o.dt) {
    if (!(*o.dt > 0.0 && *o.dt <= kMaxDt)) throw Error(ErrorCode::ConfigError, "--dt must lie in (0, 0.1]");
    scene.dt = *o.dt;
  }
  return scene;
}

RecorderConfig recorder_config(const RunOptions& o, bool reproducible) {
  RecorderConfig config;
  config.capacity = o.capacity;
  config.default_dir = o.save_dir;
  config.format = resolve_format(o.format, o.record);
  if (reproducible) config.now = reproducible_now;
  return config;
}

json particle_state(const ParticleView& p) {
  return {{"id", p.id},
          {"px", p.position.x}, {"py", p.position.y}, {"pz", p.position.z},
          {"vx", p.velocity.x}, {"vy", p.velocity.y}, {"vz", p.velocity.z},
          {"fx", p.force.x},    {"fy", p.force.y},    {"fz", p.force.z},
          {"m", p.mass}};
}

json state_line(std::string_view type, const FrameSnapshot& s) {
  json objects = json::array();
  for (const auto& obj : s.objects) {
    json particles = json::array();
    for (const auto& p : obj.particles) particles.push_back(particle_state(p));
    objects.push_back({{"id", obj.id}, {"particles", std::move(particles)}});
  }
  return {{"type", type},
          {"t", s.t},
          {"mode", mode_name(s.mode)},
          {"dimension", static_cast<int>(s.dimension)},
          {"drag_force", s.drag_force},
          {"objects", std::move(objects)}};
}

bool snapshot_in_bounds(const FrameSnapshot& s, const Bounds& b) {
  for (const auto& obj : s.objects) {
    for (const auto& p : obj.particles) {
      if (!b.contains(p.position)) return false;
    }
  }
  return true;
}

bool has_blowup(const FrameSnapshot& s, std::ostream& err) {
  bool blown = false;
  for (const auto& e : s.events) {
    if (const auto* error = std::get_if<ErrorEvent>(&e); error && error->code == ErrorCode::NumericalBlowup) {
      err << "error: " << error->message << '\n';
      blown = true;
    }
  }
  return blown;
}

struct TimedCommand {
  double at = 0.0;
  Command command;
};

std::vector<TimedCommand> load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open script '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("script is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::ConfigError, "script must be a JSON array");

  std::vector<TimedCommand> script;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("at") || !entry.at("at").is_number() || !entry.contains("command")) {
      throw Error(ErrorCode::ConfigError, "script entries need a numeric \"at\" and a \"command\"");
    }
    const double at = entry.at("at").get<double>();
    if (!std::isfinite(at) || at < 0.0 || (!script.empty() && at < script.back().at)) {
      throw Error(ErrorCode::ConfigError, "script \"at\" times must be finite and non-decreasing");
    }
    try {
      script.push_back({at, protocol::decode_client(entry.at("command").dump())});
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, std::string("bad script command: ") + e.what());
    }
  }
  return script;
}

int report(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return e.code() == ErrorCode::NumericalBlowup ? kBlowup : kConfigError;
}

}  // namespace

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    if (o.steps < 0) throw Error(ErrorCode::ConfigError, "--steps must be non-negative");
    const SceneConfig scene = load_configured_scene(o);
    Session session(scene, recorder_config(o, true));
    session.start_simulation();
    if (o.record) session.start_recording();

    bool blown = false;
    long done = 0;
    for (; done < o.steps; ++done) {
      const FrameSnapshot s = session.tick(scene.dt);
      if (has_blowup(s, err)) {
        blown = true;
        break;
      }
    }

    if (o.record) {
      const Recording& buffer = session.recorder().buffer();
      write_recording(buffer, resolve_format(o.format, o.record), *o.record);
      out << "wrote " << buffer.frames.size() << " frames to " << o.record->string() << '\n';
    }
    out << "ran " << done << " steps, t=" << session.clock() << '\n';
    if (blown) {
      err << "simulation diverged; reduce dt or stiffness\n";
      return kBlowup;
    }
    return kOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_script(const ScriptOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const SceneConfig scene = load_configured_scene(o.run);
    const std::vector<TimedCommand> script = load_script(o.script);
    long steps = o.run.steps;
    if (!o.steps_given && !script.empty()) {
      steps = static_cast<long>(std::ceil((script.back().at + 1.0) / scene.dt));
    }

    Session session(scene, recorder_config(o.run, false));
    session.start_simulation();
    if (o.run.record) session.start_recording();
    out << state_line("initial", session.snapshot()).dump() << '\n';

    std::size_t next = 0;
    bool blown = false;
    bool in_bounds = true;
    std::optional<DragHandle> held;
    FrameSnapshot last = session.snapshot();
    for (long i = 0; i < steps; ++i) {
      // Commands due at or before the current clock are applied on this tick.
      const double now = session.clock() + 1e-9;
      while (next < script.size() && script[next].at <= now) session.post(script[next++].command);

      last = session.tick(scene.dt);
      for (const auto& e : last.events) out << protocol::encode_event(e) << '\n';
      if (last.drag && (!held || held->object != last.drag->object || held->particle != last.drag->particle ||
                        held->target != last.drag->target)) {
        const Vec3& target = last.drag->target;
        out << json{{"type", "drag"},
                    {"t", last.t},
                    {"object", last.drag->object},
                    {"particle", last.drag->particle},
                    {"target", {target.x, target.y, target.z}}}
                   .dump()
            << '\n';
      } else if (!last.drag && held) {
        out << state_line("release", last).dump() << '\n';
      }
      held = last.drag;
      in_bounds = in_bounds && snapshot_in_bounds(last, session.world().params.bounds);
      if (has_blowup(last, err)) {
        blown = true;
        break;
      }
    }

    if (o.run.record && session.recorder().state() != Recorder::State::Idle) {
      write_recording(session.recorder().buffer(), resolve_format(o.run.format, o.run.record), *o.run.record);
    }
    json final_line = state_line("final", session.snapshot());
    final_line["in_bounds"] = in_bounds;
    final_line["commands_applied"] = next;
    out << final_line.dump() << '\n';
    return blown ? kBlowup : kOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_replay(const ReplayOptions& o, std::ostream& out, std::ostream& err) {
  Recording recording;
  std::optional<Bounds> bounds;
  try {
    recording = load_recording(o.dump, o.check ? LoadMode::Lenient : LoadMode::Strict);
    if (o.scene) bounds = load_scene(*o.scene).world.bounds;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  std::size_t frames = 0;
  std::size_t particles = 0;
  for (const FrameRecord& frame : replay(recording)) {
    ++frames;
    for (const auto& obj : frame.objects) particles += obj.particles.size();
  }
  out << "replayed " << frames << " frames (" << particles << " particle states)";
  if (!recording.frames.empty()) {
    out << ", t=" << recording.frames.front().t << ".." << recording.frames.back().t;
  }
  out << '\n';

  if (!o.check) return kOk;
  std::vector<std::string> violations = recording_violations(recording);
  if (bounds) {
    for (const auto& frame : recording.frames) {
      for (const auto& obj : frame.objects) {
        for (const auto& p : obj.particles) {
          if (!bounds->contains(p.position)) {
            violations.push_back("frame " + std::to_string(frame.index) + ": object " + std::to_string(obj.id) +
                                 " particle " + std::to_string(p.id) + " outside the view space");
          }
        }
      }
    }
  }
  for (const auto& v : violations) err << "violation: " << v << '\n';
  if (!violations.empty()) return kCheckFailed;
  out << "check passed\n";
  return kOk;
}

int cmd_ahp(const AhpOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const auto print = [&](std::string_view title, const ahp::PriorityVector& pv) {
      out << title << '\n';
      for (std::size_t i = 0; i < pv.labels.size(); ++i) {
        out << pv.labels[i] << ',' << std::fixed << std::setprecision(4) << pv.weights[i] << '\n';
      }
      out.unsetf(std::ios::floatfield);
    };
    const ahp::PriorityVector value = ahp::priority_vector(ahp::read_matrix_csv(o.value_matrix.string()));
    print("# relative value", value);
    if (!o.cost_matrix) return kOk;

    const ahp::PriorityVector cost = ahp::priority_vector(ahp::read_matrix_csv(o.cost_matrix->string()));
    print("# relative cost", cost);
    const auto points = ahp::cost_value_points(value, cost);
    if (o.points_out) {
      std::ofstream file(*o.points_out);
      if (!file) throw Error(ErrorCode::IoError, "cannot write '" + o.points_out->string() + "'");
      ahp::write_points_csv(points, file, o.decimals);
      out << "# wrote " << points.size() << " points to " << o.points_out->string() << '\n';
    } else {
      out << "# cost-value points\n";
      ahp::write_points_csv(points, out, o.decimals);
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const SceneConfig scene = load_scene(o.scene);
    RecorderConfig recorder;
    recorder.default_dir = o.save_dir;
    recorder.capacity = o.capacity;
    recorder.format = o.format.value_or(DumpFormat::Xml);
    Session session(scene, recorder);

    ServerOptions server_options;
    server_options.address = o.address;
    server_options.port = o.port;
    server_options.dt = scene.dt;
    SessionServer server(session, server_options);
    server.start();
    out << "serving on ws://" << o.address << ':' << server.port() << server_options.path << std::endl;

    boost::asio::io_context signals_ctx;
    boost::asio::signal_set signals(signals_ctx, SIGINT, SIGTERM);
    signals.async_wait([](const boost::system::error_code&, int) {});
    signals_ctx.run();

    server.stop();
    out << "shut down" << std::endl;
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace softbody::cli
