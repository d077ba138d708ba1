#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "softbody/dynamics.hpp"
#include "softbody/error.hpp"
#include "softbody/recording.hpp"
#include "softbody/scene.hpp"
#include "softbody/world.hpp"

namespace softbody {

enum class Mode { Idle, Running };
enum class NudgeDirection { Up, Down, Left, Right };

std::string_view mode_name(Mode mode);

namespace command {

struct StartSimulation {
  friend bool operator==(const StartSimulation&, const StartSimulation&) = default;
};
struct DragStart {
  Vec3 point;
  friend bool operator==(const DragStart&, const DragStart&) = default;
};
struct DragMove {
  Vec3 point;
  friend bool operator==(const DragMove&, const DragMove&) = default;
};
struct DragEnd {
  friend bool operator==(const DragEnd&, const DragEnd&) = default;
};
struct Nudge {
  NudgeDirection direction = NudgeDirection::Up;
  friend bool operator==(const Nudge&, const Nudge&) = default;
};
struct SetIntegrator {
  IntegratorKind kind = IntegratorKind::RungeKutta4;
  friend bool operator==(const SetIntegrator&, const SetIntegrator&) = default;
};
struct SetDimension {
  Dimension dimension = Dimension::D2;
  friend bool operator==(const SetDimension&, const SetDimension&) = default;
};
struct LinkObjects {
  int object_a = 0;
  int particle_a = 0;
  int object_b = 0;
  int particle_b = 0;
  double stiffness = 50.0;
  double damping = 0.5;
  friend bool operator==(const LinkObjects&, const LinkObjects&) = default;
};
struct StartSave {
  friend bool operator==(const StartSave&, const StartSave&) = default;
};
struct StopSave {
  friend bool operator==(const StopSave&, const StopSave&) = default;
};
struct SaveConfirm {
  std::optional<std::string> name;
  std::optional<std::string> dir;
  friend bool operator==(const SaveConfirm&, const SaveConfirm&) = default;
};
struct Reset {
  friend bool operator==(const Reset&, const Reset&) = default;
};

}  // namespace command

using Command =
    std::variant<command::StartSimulation, command::DragStart, command::DragMove, command::DragEnd,
                 command::Nudge, command::SetIntegrator, command::SetDimension,
                 command::LinkObjects, command::StartSave, command::StopSave,
                 command::SaveConfirm, command::Reset>;

/// Multi-producer FIFO feeding the single loop thread.
class CommandQueue {
 public:
  void push(Command c);
  std::vector<Command> drain();
  bool empty() const;

 private:
  mutable std::mutex mutex_;
  std::deque<Command> queue_;
};

struct NearestParticle {
  int object = 0;
  int particle = 0;
  double distance = 0.0;
};

/// Closest particle to `point`; ties go to the lower object id, then the lower particle id.
/// Throws EmptyWorld.
NearestParticle nearest_particle(const WorldState& world, const Vec3& point);

/// |f| with exactly four digits after the point, rounded half away from zero on the
/// shortest decimal representation of the magnitude.
std::string format_force_magnitude(const Vec3& f);

/// Autonomous random-target steering before a simulation is started.
struct IdleWander {
  std::optional<Vec3> target;
  double steering_gain = 5.0;
  double arrival_epsilon = 0.0;
  std::uint64_t rng_seed = 0;
};

struct ErrorEvent {
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};
struct SavedEvent {
  std::filesystem::path path;
};
using SessionEvent = std::variant<ErrorEvent, SavePrompt, SavedEvent>;

struct ParticleView {
  int id = 0;
  Vec3 position;
  Vec3 velocity;
  Vec3 force;
  double mass = 0.0;
};

struct ObjectView {
  int id = 0;
  std::vector<ParticleView> particles;
  std::vector<std::array<int, 2>> springs;
};

/// Immutable per-tick view handed to renderers, recorders and the network layer.
struct FrameSnapshot {
  std::uint64_t tick = 0;
  double t = 0.0;
  Mode mode = Mode::Idle;
  IntegratorKind integrator = IntegratorKind::RungeKutta4;
  Dimension dimension = Dimension::D2;
  bool recording = false;
  std::vector<ObjectView> objects;
  std::string drag_force = "0.0000";
  std::optional<DragHandle> drag;
  /// Set on the first snapshot and whenever the object topology was rebuilt.
  bool topology_changed = false;
  std::vector<std::string> markers;
  std::vector<SessionEvent> events;
};

/// Owns the simulation loop state. `post` may be called from any thread; everything else
/// belongs to the loop thread.
class Session {
 public:
  explicit Session(SceneConfig scene, RecorderConfig recorder = {});

  void post(Command c) { queue_.push(std::move(c)); }

  /// Applies queued commands in arrival order, advances the simulation by `dt`, feeds the
  /// recorder and returns the resulting snapshot. Command failures and blow-ups become
  /// error events on the snapshot.
  FrameSnapshot tick(double dt);

  /// Applies one command immediately. Failures throw.
  void apply(const Command& c);

  void start_simulation();
  void reset();
  void set_integrator(IntegratorKind kind) { integrator_ = kind; }

  DragHandle begin_drag(const Vec3& point);
  void update_drag(const Vec3& point);
  void end_drag();
  void nudge(NudgeDirection direction);

  void idle_update(double dt);
  void change_dimension(Dimension d);
  int link(const command::LinkObjects& args);

  void start_recording();
  SavePrompt stop_recording();
  std::filesystem::path confirm_save(const std::optional<std::string>& name = std::nullopt,
                                     const std::optional<std::filesystem::path>& dir = std::nullopt);

  /// Forces applied to the world on every running step, e.g. scripted pushes.
  void set_external_forces(std::vector<ExternalForce> forces) { external_ = std::move(forces); }

  Mode mode() const { return mode_; }
  IntegratorKind integrator() const { return integrator_; }
  Dimension dimension() const { return dimension_; }
  const WorldState& world() const { return world_; }
  WorldState& world() { return world_; }
  const std::optional<DragHandle>& drag() const { return drag_; }
  const std::optional<IdleWander>& idle() const { return idle_; }
  const Recorder& recorder() const { return recorder_; }
  const SceneConfig& scene() const { return scene_; }
  double clock() const { return world_.clock; }

  FrameSnapshot snapshot() const;
  FrameRecord frame_record() const;

 private:
  void require_drag() const;
  void running_step(double dt);
  Vec3 draw_idle_target();
  IdleWander fresh_idle() const;

  SceneConfig scene_;
  WorldState world_;
  Dimension dimension_;
  IntegratorKind integrator_;
  Mode mode_ = Mode::Idle;
  std::optional<DragHandle> drag_;
  std::optional<IdleWander> idle_;
  std::vector<ExternalForce> external_;
  Recorder recorder_;
  CommandQueue queue_;
  std::mt19937_64 rng_;

  Vec3 last_drag_force_;
  std::uint64_t ticks_ = 0;
  bool topology_changed_ = true;
  std::vector<std::string> pending_markers_;
  std::vector<SessionEvent> pending_events_;
};

}  // namespace softbody
