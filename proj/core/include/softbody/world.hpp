#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "softbody/vec3.hpp"

namespace softbody {

enum class Dimension { D1 = 1, D2 = 2, D3 = 3 };

enum class Layer { Outer, Inner };

struct Particle {
  int id = 0;
  Vec3 position;
  Vec3 velocity;
  Vec3 force;  // accumulator
  double mass = 1.0;
  bool fixed = false;
};

struct Spring {
  int a = 0;
  int b = 0;
  double stiffness = 0.0;
  double damping = 0.0;
  double rest_length = 0.0;
};

/// Oriented boundary element: an edge (2 ids) in 2D or a triangle (3 ids) in 3D.
struct Face {
  std::array<int, 3> ids{};
  std::uint8_t arity = 0;
  Layer layer = Layer::Outer;

  std::span<const int> vertices() const { return {ids.data(), arity}; }

  static Face edge(int a, int b, Layer layer) { return {{a, b, -1}, 2, layer}; }
  static Face triangle(int a, int b, int c, Layer layer) { return {{a, b, c}, 3, layer}; }
};

struct ElasticObject {
  int id = 0;
  Dimension dimension = Dimension::D1;
  std::vector<Particle> particles;
  std::vector<Spring> springs;
  std::vector<Face> faces;
  /// nRT numerator of the ideal-gas pressure, per closed layer.
  std::map<Layer, double> pressure;
  /// Enclosed measure of each closed layer at construction; the collapse floor is relative to it.
  std::map<Layer, double> initial_measure;
};

/// Spring between particles of two different objects.
struct LinkSpring {
  int object_a = 0;
  int object_b = 0;
  Spring spring;  // spring.a indexes object_a, spring.b indexes object_b
};

struct Bounds {
  Vec3 min{-10.0, -10.0, -10.0};
  Vec3 max{10.0, 10.0, 10.0};

  Vec3 clamp(const Vec3& p) const;
  bool contains(const Vec3& p) const;
  Vec3 extent() const { return max - min; }
  /// Largest side of the box.
  double max_extent() const;
};

struct WorldParams {
  Vec3 gravity{0.0, -9.81, 0.0};
  Bounds bounds;
  double restitution = 0.5;
  double collision_stiffness = 500.0;
};

struct WorldState {
  std::vector<ElasticObject> objects;  // objects[i].id == i
  std::vector<LinkSpring> links;
  WorldParams params;
  double clock = 0.0;

  /// Appends `object`, assigning it the next id. Returns the id.
  int add_object(ElasticObject object);

  ElasticObject& object(int id);
  const ElasticObject& object(int id) const;
  Particle& particle(int object_id, int particle_id);
  const Particle& particle(int object_id, int particle_id) const;

  std::size_t particle_count() const;
};

}  // namespace softbody
