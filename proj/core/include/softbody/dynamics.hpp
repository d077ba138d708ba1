#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "softbody/world.hpp"

namespace softbody {

enum class IntegratorKind { Euler, Midpoint, RungeKutta4 };

/// "euler", "midpoint" or "rk4".
std::string_view integrator_name(IntegratorKind kind);
std::optional<IntegratorKind> parse_integrator(std::string_view name);

inline constexpr double kDefaultDt = 1.0 / 60.0;
inline constexpr double kMaxDt = 0.1;
/// Springs shorter than this have no defined direction and contribute no force.
inline constexpr double kDegenerateSpringLength = 1e-9;
/// Pressure is capped once a layer shrinks below this fraction of its initial measure.
inline constexpr double kCollapseFraction = 1e-6;
/// Coordinates beyond this multiple of the view extent count as a numerical blow-up.
inline constexpr double kBlowupFactor = 1e6;

/// Spring-damper attachment pulling one particle toward the mouse (or keyboard) target.
struct DragHandle {
  int object = 0;
  int particle = 0;
  Vec3 target;
  double k_drag = 50.0;
  double c_drag = 2.0;
  bool active = true;
};

struct ExternalForce {
  int object = 0;
  int particle = 0;
  Vec3 force;
};

enum class ForceSource { External, Gravity, Mouse, Spring, Pressure, Collision };
inline constexpr std::size_t kForceSourceCount = 6;

/// Forces acting besides those the world generates on its own.
struct ForceInputs {
  std::optional<DragHandle> drag;
  std::vector<ExternalForce> external;
};

struct ForceBreakdown {
  struct Entry {
    std::array<Vec3, kForceSourceCount> by_source{};
    Vec3 total;

    const Vec3& operator[](ForceSource s) const { return by_source[static_cast<std::size_t>(s)]; }
  };
  std::vector<std::vector<Entry>> objects;  // [object][particle]

  const Entry& at(int object, int particle) const {
    return objects[static_cast<std::size_t>(object)][static_cast<std::size_t>(particle)];
  }
};

void clear_forces(WorldState& world);
void apply_gravity(WorldState& world);

/// Hooke spring plus damping along the spring axis, for object springs and links.
/// Returns the number of degenerate springs skipped.
std::size_t apply_spring_forces(WorldState& world);

/// Area (2D edge loop) or volume (3D triangle shell) enclosed by `layer`. Positive for
/// counterclockwise / outward-wound faces. Throws OpenBoundary if the faces do not close.
double enclosed_measure(const ElasticObject& object, Layer layer);

/// Ideal-gas pressure P = nRT / measure applied along each face's outward normal.
void apply_pressure_forces(WorldState& world);

/// Adds k (target - p) - c v to the grabbed particle and returns that force.
Vec3 apply_drag_force(WorldState& world, const DragHandle& handle);

void apply_external_forces(WorldState& world, std::span<const ExternalForce> forces);

/// Pushes particles of overlapping objects apart with mirrored penalty forces.
void apply_collision_penalties(WorldState& world);

/// Projects escaped particles back onto the walls of the view space and reflects their
/// normal velocity scaled by the restitution.
void project_to_bounds(WorldState& world);

/// Boundary projection followed by inter-object penalty forces.
void resolve_collisions(WorldState& world);

/// clear, gravity, spring, pressure, drag, external, collision. Returns the drag force.
Vec3 accumulate_forces(WorldState& world, const ForceInputs& inputs);

/// Same pipeline as `accumulate_forces`, recording each source separately. The world's
/// accumulators are left holding the totals.
ForceBreakdown total_force(WorldState& world, const ForceInputs& inputs);

struct StepReport {
  Vec3 drag_force;
};

/// Advances positions and velocities by `dt`, then projects onto the view space.
/// On blow-up the world is restored and NumericalBlowup is thrown.
StepReport step(WorldState& world, double dt, IntegratorKind kind, const ForceInputs& inputs = {});

}  // namespace softbody
