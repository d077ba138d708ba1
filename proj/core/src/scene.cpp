#include "softbody/scene.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "softbody/error.hpp"
#include "softbody/mesh.hpp"

namespace softbody {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

Vec3 read_vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) config_error(field + " must be an array of 3 numbers");
  Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  if (!is_finite(v)) config_error(field + " must be finite");
  return v;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ObjectConfig read_object(const json& j, Dimension dimension, const std::string& where) {
  if (!j.is_object()) config_error(where + " must be an object");
  ObjectConfig o;
  if (j.contains("type") && j.at("type").get<std::string>() != builder_name(dimension)) {
    config_error(where + ".type '" + j.at("type").get<std::string>() + "' does not match dimension " +
                 std::to_string(static_cast<int>(dimension)) + " (expected '" +
                 std::string(builder_name(dimension)) + "')");
  }
  read(j, "n", o.n);
  read(j, "length", o.length);
  read(j, "n_outer", o.n_outer);
  read(j, "radius", o.radius);
  read(j, "inner_ratio", o.inner_ratio);
  read(j, "depth", o.depth);
  read(j, "mass", o.mass);
  read(j, "stiffness", o.stiffness);
  read(j, "damping", o.damping);
  if (j.contains("pressure")) {
    const json& p = j.at("pressure");
    read(p, "outer", o.pressure_outer);
    read(p, "inner", o.pressure_inner);
  }
  if (j.contains("center")) o.center = read_vec3(j.at("center"), where + ".center");
  read(j, "fixed", o.fixed);
  return o;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

void validate_scene(const SceneConfig& s) {
  const Bounds& b = s.world.bounds;
  if (!(b.min.x < b.max.x && b.min.y < b.max.y && b.min.z < b.max.z)) {
    config_error("world.bounds.min must be below world.bounds.max on every axis");
  }
  if (!is_finite(s.world.gravity)) config_error("world.gravity must be finite");
  if (!(s.world.restitution >= 0.0 && s.world.restitution <= 1.0)) config_error("world.restitution must lie in [0, 1]");
  if (!(s.world.collision_stiffness >= 0.0)) config_error("world.collision_stiffness must be non-negative");
  if (!(s.dt > 0.0 && s.dt <= kMaxDt)) config_error("dt must lie in (0, 0.1]");
  if (!(s.k_drag > 0.0)) config_error("drag.k must be positive");
  if (!(s.c_drag >= 0.0)) config_error("drag.c must be non-negative");
  if (!(s.steering_gain > 0.0)) config_error("idle.steering_gain must be positive");
  try {
    (void)build_world(s, s.dimension);
  } catch (const Error& e) {
    config_error(std::string("object parameters rejected: ") + e.what());
  }
}

}  // namespace

std::string_view builder_name(Dimension d) {
  switch (d) {
    case Dimension::D1: return "chain";
    case Dimension::D2: return "two_layer_disc";
    case Dimension::D3: return "two_layer_sphere";
  }
  return "chain";
}

std::optional<Dimension> dimension_from_int(int d) {
  if (d < 1 || d > 3) return std::nullopt;
  return static_cast<Dimension>(d);
}

SceneConfig parse_scene(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("scene is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("scene must be a JSON object");

  SceneConfig s;
  try {
    if (doc.contains("dimension")) {
      const auto d = dimension_from_int(doc.at("dimension").get<int>());
      if (!d) config_error("dimension must be 1, 2 or 3");
      s.dimension = *d;
    }
    if (doc.contains("object")) s.object = read_object(doc.at("object"), s.dimension, "object");
    if (doc.contains("objects")) {
      std::size_t i = 0;
      for (const auto& extra : doc.at("objects")) {
        s.extra_objects.push_back(read_object(extra, s.dimension, "objects[" + std::to_string(i++) + "]"));
      }
    }
    if (doc.contains("world")) {
      const json& w = doc.at("world");
      if (w.contains("gravity")) s.world.gravity = read_vec3(w.at("gravity"), "world.gravity");
      if (w.contains("bounds")) {
        const json& b = w.at("bounds");
        s.world.bounds.min = read_vec3(b.at("min"), "world.bounds.min");
        s.world.bounds.max = read_vec3(b.at("max"), "world.bounds.max");
      }
      read(w, "restitution", s.world.restitution);
      read(w, "collision_stiffness", s.world.collision_stiffness);
    }
    if (doc.contains("integrator")) {
      const auto name = doc.at("integrator").get<std::string>();
      const auto kind = parse_integrator(name);
      if (!kind) config_error("integrator must be euler, midpoint or rk4 (got '" + name + "')");
      s.integrator = *kind;
    }
    read(doc, "dt", s.dt);
    read(doc, "seed", s.seed);
    if (doc.contains("drag")) {
      read(doc.at("drag"), "k", s.k_drag);
      read(doc.at("drag"), "c", s.c_drag);
    }
    if (doc.contains("idle")) read(doc.at("idle"), "steering_gain", s.steering_gain);
  } catch (const json::exception& e) {
    config_error(std::string("scene field has the wrong type: ") + e.what());
  }
  validate_scene(s);
  s.digest = fnv1a_hex(doc.dump());
  return s;
}

SceneConfig load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open scene file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

ElasticObject build_object(const ObjectConfig& c, Dimension dimension) {
  const SpringMaterial material{c.stiffness, c.damping};
  ElasticObject obj;
  switch (dimension) {
    case Dimension::D1:
      obj = build_chain(c.n, c.length, c.mass, material);
      break;
    case Dimension::D2:
      obj = build_two_layer_disc(c.n_outer, c.radius, c.inner_ratio, c.mass, material,
                                 c.pressure_outer, c.pressure_inner);
      break;
    case Dimension::D3:
      obj = build_two_layer_sphere(c.depth, c.radius, c.inner_ratio, c.mass, material,
                                   c.pressure_outer, c.pressure_inner);
      break;
  }
  translate(obj, c.center);
  for (int id : c.fixed) {
    if (id < 0 || id >= static_cast<int>(obj.particles.size())) {
      throw Error(ErrorCode::InvalidArgument, "fixed particle id " + std::to_string(id) + " out of range");
    }
    obj.particles[static_cast<std::size_t>(id)].fixed = true;
  }
  return obj;
}

WorldState build_world(const SceneConfig& scene, Dimension dimension) {
  WorldState world;
  world.params = scene.world;
  world.add_object(build_object(scene.object, dimension));
  if (dimension == scene.dimension) {
    for (const auto& extra : scene.extra_objects) world.add_object(build_object(extra, dimension));
  }
  return world;
}

}  // namespace softbody
