#include "softbody/session.hpp"

#include <array>
#include <charconv>
#include <limits>

#include <spdlog/spdlog.h>

#include "softbody/mesh.hpp"

namespace softbody {
namespace {

constexpr double kNudgeFraction = 0.01;
constexpr double kIdleMargin = 0.10;
constexpr double kArrivalFraction = 0.05;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec3 centroid(const ElasticObject& obj) {
  Vec3 c;
  for (const auto& p : obj.particles) c += p.position;
  return c / static_cast<double>(obj.particles.size());
}

}  // namespace

std::string_view mode_name(Mode mode) { return mode == Mode::Idle ? "idle" : "running"; }

void CommandQueue::push(Command c) {
  std::lock_guard lock(mutex_);
  queue_.push_back(std::move(c));
}

std::vector<Command> CommandQueue::drain() {
  std::lock_guard lock(mutex_);
  std::vector<Command> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

bool CommandQueue::empty() const {
  std::lock_guard lock(mutex_);
  return queue_.empty();
}

NearestParticle nearest_particle(const WorldState& world, const Vec3& point) {
  std::optional<NearestParticle> best;
  for (const auto& obj : world.objects) {
    for (const auto& p : obj.particles) {
      const double d = distance(point, p.position);
      if (!best || d < best->distance) best = NearestParticle{obj.id, p.id, d};
    }
  }
  if (!best) throw Error(ErrorCode::EmptyWorld, "the world has no particles");
  return *best;
}

std::string format_force_magnitude(const Vec3& f) {
  const double magnitude = norm(f);
  std::array<char, 400> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), magnitude, std::chars_format::fixed);
  std::string digits(buf.data(), end);

  const auto dot_pos = digits.find('.');
  std::string whole = digits.substr(0, dot_pos);
  std::string frac = dot_pos == std::string::npos ? "" : digits.substr(dot_pos + 1);
  const bool round_up = frac.size() > 4 && frac[4] >= '5';
  frac.resize(4, '0');

  if (round_up) {
    std::string all = whole + frac;
    int i = static_cast<int>(all.size()) - 1;
    while (i >= 0 && all[static_cast<std::size_t>(i)] == '9') all[static_cast<std::size_t>(i--)] = '0';
    if (i < 0) {
      all.insert(all.begin(), '1');
    } else {
      ++all[static_cast<std::size_t>(i)];
    }
    whole = all.substr(0, all.size() - 4);
    frac = all.substr(all.size() - 4);
  }
  return whole + "." + frac;
}

Session::Session(SceneConfig scene, RecorderConfig recorder)
    : scene_(std::move(scene)),
      world_(build_world(scene_, scene_.dimension)),
      dimension_(scene_.dimension),
      integrator_(scene_.integrator),
      recorder_(std::move(recorder)),
      rng_(scene_.seed) {
  idle_ = fresh_idle();
}

IdleWander Session::fresh_idle() const {
  IdleWander w;
  w.steering_gain = scene_.steering_gain;
  w.arrival_epsilon = kArrivalFraction * world_.params.bounds.max_extent();
  w.rng_seed = scene_.seed;
  return w;
}

void Session::apply(const Command& c) {
  std::visit(Overloaded{
                 [&](const command::StartSimulation&) { start_simulation(); },
                 [&](const command::DragStart& d) { begin_drag(d.point); },
                 [&](const command::DragMove& d) { update_drag(d.point); },
                 [&](const command::DragEnd&) { end_drag(); },
                 [&](const command::Nudge& n) { nudge(n.direction); },
                 [&](const command::SetIntegrator& s) { set_integrator(s.kind); },
                 [&](const command::SetDimension& s) { change_dimension(s.dimension); },
                 [&](const command::LinkObjects& l) { link(l); },
                 [&](const command::StartSave&) { start_recording(); },
                 [&](const command::StopSave&) { stop_recording(); },
                 [&](const command::SaveConfirm& s) {
                   std::optional<std::filesystem::path> dir;
                   if (s.dir) dir = *s.dir;
                   confirm_save(s.name, dir);
                 },
                 [&](const command::Reset&) { reset(); },
             },
             c);
}

void Session::start_simulation() {
  mode_ = Mode::Running;
  idle_.reset();
}

void Session::reset() {
  WorldState fresh = build_world(scene_, dimension_);
  fresh.clock = world_.clock;
  fresh.params = world_.params;
  world_ = std::move(fresh);
  drag_.reset();
  mode_ = Mode::Idle;
  idle_ = fresh_idle();
  topology_changed_ = true;
}

DragHandle Session::begin_drag(const Vec3& point) {
  if (mode_ != Mode::Running) throw Error(ErrorCode::NotRunning, "start the simulation before dragging");
  const NearestParticle hit = nearest_particle(world_, point);
  DragHandle h;
  h.object = hit.object;
  h.particle = hit.particle;
  h.target = world_.params.bounds.clamp(point);
  h.k_drag = scene_.k_drag;
  h.c_drag = scene_.c_drag;
  drag_ = h;
  return h;
}

void Session::require_drag() const {
  if (!drag_) throw Error(ErrorCode::NoActiveDrag, "no object is being dragged");
}

void Session::update_drag(const Vec3& point) {
  require_drag();
  drag_->target = world_.params.bounds.clamp(point);
}

void Session::end_drag() {
  require_drag();
  drag_.reset();
  last_drag_force_ = {};
}

void Session::nudge(NudgeDirection direction) {
  require_drag();
  const Vec3 extent = world_.params.bounds.extent();
  Vec3 delta;
  switch (direction) {
    case NudgeDirection::Up: delta.y = kNudgeFraction * extent.y; break;
    case NudgeDirection::Down: delta.y = -kNudgeFraction * extent.y; break;
    case NudgeDirection::Left: delta.x = -kNudgeFraction * extent.x; break;
    case NudgeDirection::Right: delta.x = kNudgeFraction * extent.x; break;
  }
  drag_->target = world_.params.bounds.clamp(drag_->target + delta);
}

Vec3 Session::draw_idle_target() {
  const Bounds& b = world_.params.bounds;
  const Vec3 margin = kIdleMargin * b.extent();
  const auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  };
  Vec3 t{uniform(b.min.x + margin.x, b.max.x - margin.x), uniform(b.min.y + margin.y, b.max.y - margin.y),
         uniform(b.min.z + margin.z, b.max.z - margin.z)};
  // Lower-dimensional objects stay in their plane / on their line.
  if (dimension_ != Dimension::D3) t.z = 0.0;
  if (dimension_ == Dimension::D1) t.y = 0.0;
  return b.clamp(t);
}

void Session::idle_update(double dt) {
  if (mode_ != Mode::Idle || !idle_) throw Error(ErrorCode::InvalidArgument, "idle update outside idle mode");
  if (!idle_->target) idle_->target = draw_idle_target();

  const ElasticObject& primary = world_.object(0);
  const Vec3 c = centroid(primary);
  if (distance(c, *idle_->target) < idle_->arrival_epsilon) idle_->target = draw_idle_target();

  const double n = static_cast<double>(primary.particles.size());
  const Vec3 steer = (idle_->steering_gain / n) * (*idle_->target - c);
  ForceInputs inputs;
  inputs.external.reserve(primary.particles.size());
  for (const auto& p : primary.particles) inputs.external.push_back({primary.id, p.id, steer});
  step(world_, dt, integrator_, inputs);
}

void Session::running_step(double dt) {
  ForceInputs inputs;
  inputs.drag = drag_;
  inputs.external = external_;
  const StepReport report = step(world_, dt, integrator_, inputs);
  last_drag_force_ = drag_ ? report.drag_force : Vec3{};
}

void Session::change_dimension(Dimension d) {
  if (d == dimension_) {
    throw Error(ErrorCode::SameDimension, "the scene is already " + std::to_string(static_cast<int>(d)) + "D");
  }
  WorldState rebuilt;
  try {
    rebuilt = build_world(scene_, d);
  } catch (const Error& e) {
    throw Error(ErrorCode::UnsupportedDimension,
                "cannot build the " + std::to_string(static_cast<int>(d)) + "D object: " + e.what());
  }
  rebuilt.params = world_.params;
  rebuilt.clock = world_.clock;
  world_ = std::move(rebuilt);
  dimension_ = d;
  drag_.reset();
  last_drag_force_ = {};
  if (idle_) idle_->target.reset();
  topology_changed_ = true;
  pending_markers_.push_back("dimension_change:D" + std::to_string(static_cast<int>(d)));
}

int Session::link(const command::LinkObjects& a) {
  return link_objects(world_, a.object_a, a.particle_a, a.object_b, a.particle_b, {a.stiffness, a.damping});
}

void Session::start_recording() {
  RecordingMeta meta;
  meta.dt = scene_.dt;
  meta.integrator = std::string(integrator_name(integrator_));
  meta.scene_digest = scene_.digest;
  recorder_.start(std::move(meta));
}

SavePrompt Session::stop_recording() {
  SavePrompt prompt = recorder_.stop();
  pending_events_.emplace_back(prompt);
  return prompt;
}

std::filesystem::path Session::confirm_save(const std::optional<std::string>& name,
                                            const std::optional<std::filesystem::path>& dir) {
  auto path = recorder_.confirm(name, dir);
  pending_events_.emplace_back(SavedEvent{path});
  return path;
}

FrameRecord Session::frame_record() const {
  FrameRecord f;
  f.t = world_.clock;
  for (const auto& obj : world_.objects) {
    ObjectRecord o;
    o.id = obj.id;
    o.particles.reserve(obj.particles.size());
    for (const auto& p : obj.particles) o.particles.push_back({p.id, p.position, p.velocity, p.force, p.mass});
    f.objects.push_back(std::move(o));
  }
  return f;
}

FrameSnapshot Session::snapshot() const {
  FrameSnapshot s;
  s.tick = ticks_;
  s.t = world_.clock;
  s.mode = mode_;
  s.integrator = integrator_;
  s.dimension = dimension_;
  s.recording = recorder_.capturing();
  s.drag = drag_;
  s.drag_force = format_force_magnitude(last_drag_force_);
  for (const auto& obj : world_.objects) {
    ObjectView v;
    v.id = obj.id;
    v.particles.reserve(obj.particles.size());
    for (const auto& p : obj.particles) v.particles.push_back({p.id, p.position, p.velocity, p.force, p.mass});
    v.springs.reserve(obj.springs.size());
    for (const auto& sp : obj.springs) v.springs.push_back({sp.a, sp.b});
    s.objects.push_back(std::move(v));
  }
  return s;
}

FrameSnapshot Session::tick(double dt) {
  if (!(dt > 0.0 && dt <= kMaxDt)) throw Error(ErrorCode::InvalidArgument, "dt must lie in (0, 0.1]");

  for (const Command& c : queue_.drain()) {
    try {
      apply(c);
    } catch (const Error& e) {
      pending_events_.emplace_back(ErrorEvent{e.code(), e.what()});
    }
  }

  bool advanced = true;
  try {
    if (mode_ == Mode::Idle) {
      idle_update(dt);
    } else {
      running_step(dt);
    }
  } catch (const Error& e) {
    advanced = false;
    pending_events_.emplace_back(ErrorEvent{e.code(), e.what()});
  }
  ++ticks_;

  if (recorder_.capturing() && advanced) {
    FrameRecord frame = frame_record();
    frame.markers = pending_markers_;
    try {
      recorder_.record(std::move(frame));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapacityExceeded) throw;
      spdlog::warn("{}", e.what());
      pending_events_.emplace_back(ErrorEvent{e.code(), e.what()});
      pending_events_.emplace_back(recorder_.prompt());
    }
  }

  FrameSnapshot s = snapshot();
  s.topology_changed = topology_changed_;
  s.markers = std::move(pending_markers_);
  s.events = std::move(pending_events_);
  topology_changed_ = false;
  pending_markers_.clear();
  pending_events_.clear();
  return s;
}

}  // namespace softbody
