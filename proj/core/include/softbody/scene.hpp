#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softbody/dynamics.hpp"
#include "softbody/world.hpp"

namespace softbody {

/// Builder parameters for one elastic object. Every dimension's parameters carry defaults so
/// the session can rebuild the object when the user switches dimension.
struct ObjectConfig {
  // chain
  int n = 8;
  double length = 2.0;
  // two-layer disc
  int n_outer = 16;
  // two-layer disc and sphere
  double radius = 1.0;
  double inner_ratio = 0.6;
  int depth = 1;
  // shared
  double mass = 2.0;
  double stiffness = 50.0;
  double damping = 0.5;
  double pressure_outer = 40.0;
  double pressure_inner = 16.0;
  Vec3 center;
  /// Particle ids pinned in place.
  std::vector<int> fixed;
};

struct SceneConfig {
  Dimension dimension = Dimension::D2;
  ObjectConfig object;
  /// Additional objects built at the configured dimension only; linkable to the primary.
  std::vector<ObjectConfig> extra_objects;
  WorldParams world;
  IntegratorKind integrator = IntegratorKind::RungeKutta4;
  double dt = kDefaultDt;
  std::uint64_t seed = 1;
  double k_drag = 50.0;
  double c_drag = 2.0;
  double steering_gain = 5.0;
  /// FNV-1a of the canonical JSON the scene was parsed from.
  std::string digest;
};

std::string_view builder_name(Dimension d);  // "chain", "two_layer_disc", "two_layer_sphere"
std::optional<Dimension> dimension_from_int(int d);

/// Parses and validates a scene document; throws ConfigError with the offending field.
SceneConfig parse_scene(std::string_view json_text);
SceneConfig load_scene(const std::filesystem::path& path);

/// Builds the object a dimension uses from shared parameters. Throws InvalidArgument.
ElasticObject build_object(const ObjectConfig& config, Dimension dimension);

/// Primary object (id 0) at `dimension`, plus the extra objects when `dimension` is the
/// scene's own.
WorldState build_world(const SceneConfig& scene, Dimension dimension);

}  // namespace softbody
