#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softbody/vec3.hpp"

namespace softbody {

struct ParticleRecord {
  int id = 0;
  Vec3 position;
  Vec3 velocity;
  Vec3 force;
  double mass = 0.0;

  friend bool operator==(const ParticleRecord&, const ParticleRecord&) = default;
};

struct ObjectRecord {
  int id = 0;
  std::vector<ParticleRecord> particles;

  friend bool operator==(const ObjectRecord&, const ObjectRecord&) = default;
};

struct FrameRecord {
  std::int64_t index = 0;
  double t = 0.0;
  std::vector<ObjectRecord> objects;
  std::vector<std::string> markers;  // e.g. "dimension_change:D2"

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct RecordingMeta {
  std::string created;  // UTC, ISO 8601
  double dt = 1.0 / 60.0;
  std::string integrator;
  std::string scene_digest;

  friend bool operator==(const RecordingMeta&, const RecordingMeta&) = default;
};

struct Recording {
  std::vector<FrameRecord> frames;
  RecordingMeta meta;

  friend bool operator==(const Recording&, const Recording&) = default;
};

enum class DumpFormat { Xml, Csv };

std::string_view format_extension(DumpFormat format);  // "xml" / "csv"

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

/// Writes `<simulation>` / `<frame>` / `<object>` / `<particle>` with every real in shortest
/// round-trip form.
void write_xml(const Recording& recording, std::ostream& sink);

/// Header `frame,t,object,particle,px,py,pz,vx,vy,vz,fx,fy,fz,mass`, one row per particle per
/// frame. Markers and metadata are not part of the CSV payload.
void write_csv(const Recording& recording, std::ostream& sink);

void write_recording(const Recording& recording, DumpFormat format, const std::filesystem::path& path);

enum class LoadMode {
  Strict,   // invariant violations raise ParseError
  Lenient,  // only structural problems raise; use `recording_violations` afterwards
};

Recording load_xml(std::istream& source, LoadMode mode = LoadMode::Strict);
Recording load_csv(std::istream& source, LoadMode mode = LoadMode::Strict);
/// Chooses the reader from the file extension. Throws IoError if the file cannot be opened.
Recording load_recording(const std::filesystem::path& path, LoadMode mode = LoadMode::Strict);

/// Human-readable list of broken invariants (index sequence, monotone t, finite values).
std::vector<std::string> recording_violations(const Recording& recording);

/// Frames in recorded order, for driving a renderer without running dynamics.
inline std::span<const FrameRecord> replay(const Recording& recording) { return recording.frames; }

/// "YYYYMMDDTHHMMSSZ"
std::string utc_timestamp_basic(std::chrono::system_clock::time_point when);
/// "YYYY-MM-DDTHH:MM:SSZ"
std::string utc_timestamp_extended(std::chrono::system_clock::time_point when);

struct RecorderConfig {
  std::size_t capacity = 36000;  // 10 minutes at 60 Hz
  std::filesystem::path default_dir = "./recordings";
  DumpFormat format = DumpFormat::Xml;
  std::function<std::chrono::system_clock::time_point()> now = [] {
    return std::chrono::system_clock::now();
  };
};

struct SavePrompt {
  std::string default_name;
  std::filesystem::path default_dir;
  std::size_t frame_count = 0;
};

/// Frame buffer behind the start-save / stop-save / confirm flow.
class Recorder {
 public:
  enum class State { Idle, Capturing, Stopped };

  explicit Recorder(RecorderConfig config = {});

  /// Begins a new capture. An unconfirmed stopped buffer is discarded.
  void start(RecordingMeta meta);

  /// Appends `frame`, renumbering it to follow the buffer. Throws CapacityExceeded, after
  /// stopping the capture, when the buffer is already full.
  void record(FrameRecord frame);

  SavePrompt stop();

  /// Prompt data for the stopped buffer awaiting confirmation.
  SavePrompt prompt() const;

  /// Writes the stopped buffer to `dir` (default dir when empty) under `name` (default name
  /// when empty) and returns the path. The buffer is released on success.
  std::filesystem::path confirm(const std::optional<std::string>& name = std::nullopt,
                                const std::optional<std::filesystem::path>& dir = std::nullopt);

  void discard();

  State state() const { return state_; }
  bool capturing() const { return state_ == State::Capturing; }
  const Recording& buffer() const { return buffer_; }
  const RecorderConfig& config() const { return config_; }

 private:
  SavePrompt make_prompt();

  RecorderConfig config_;
  Recording buffer_;
  State state_ = State::Idle;
  std::string default_name_;
};

}  // namespace softbody
