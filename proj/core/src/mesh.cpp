#include "softbody/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include "softbody/dynamics.hpp"
#include "softbody/error.hpp"

namespace softbody {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_material(const SpringMaterial& m) {
  require(finite_non_negative(m.stiffness), "stiffness must be a finite non-negative number");
  require(finite_non_negative(m.damping), "damping must be a finite non-negative number");
}

void check_layered(double r_outer, double inner_ratio, double mass, double nrt_outer,
                   double nrt_inner) {
  require(finite_positive(r_outer), "outer radius must be positive");
  require(std::isfinite(inner_ratio) && inner_ratio > 0.0 && inner_ratio < 1.0,
          "inner_ratio must lie in (0, 1)");
  require(finite_positive(mass), "mass must be positive");
  require(finite_non_negative(nrt_outer) && finite_non_negative(nrt_inner),
          "pressure constants must be non-negative");
}

Spring make_spring(const std::vector<Particle>& ps, int a, int b, const SpringMaterial& m) {
  const double rest = distance(ps[static_cast<std::size_t>(a)].position,
                               ps[static_cast<std::size_t>(b)].position);
  return {a, b, m.stiffness, m.damping, rest};
}

void add_particle(ElasticObject& obj, const Vec3& p, double mass) {
  Particle particle;
  particle.id = static_cast<int>(obj.particles.size());
  particle.position = p;
  particle.mass = mass;
  obj.particles.push_back(particle);
}

void finish_layers(ElasticObject& obj, double nrt_outer, double nrt_inner) {
  obj.pressure = {{Layer::Outer, nrt_outer}, {Layer::Inner, nrt_inner}};
  for (Layer layer : {Layer::Outer, Layer::Inner}) {
    obj.initial_measure[layer] = enclosed_measure(obj, layer);
  }
}

}  // namespace

ElasticObject build_chain(int n, double length, double mass, SpringMaterial material) {
  require(n >= 2, "a chain needs at least 2 particles");
  require(finite_positive(length), "chain length must be positive");
  require(finite_positive(mass), "mass must be positive");
  check_material(material);

  ElasticObject obj;
  obj.dimension = Dimension::D1;
  const double spacing = length / (n - 1);
  const double particle_mass = mass / n;
  for (int i = 0; i < n; ++i) {
    add_particle(obj, {-0.5 * length + spacing * i, 0.0, 0.0}, particle_mass);
  }
  for (int i = 0; i + 1 < n; ++i) {
    obj.springs.push_back(make_spring(obj.particles, i, i + 1, material));
  }
  return obj;
}

ElasticObject build_two_layer_disc(int n_outer, double r_outer, double inner_ratio, double mass,
                                   SpringMaterial material, double nrt_outer,
                                   double nrt_inner) {
  require(n_outer >= 3, "a ring needs at least 3 particles");
  check_layered(r_outer, inner_ratio, mass, nrt_outer, nrt_inner);
  check_material(material);

  ElasticObject obj;
  obj.dimension = Dimension::D2;
  const int n = n_outer;
  const double particle_mass = mass / (2.0 * n);
  const double r_inner = inner_ratio * r_outer;
  for (double radius : {r_outer, r_inner}) {
    for (int i = 0; i < n; ++i) {
      const double angle = 2.0 * std::numbers::pi * i / n;
      add_particle(obj, {radius * std::cos(angle), radius * std::sin(angle), 0.0},
                   particle_mass);
    }
  }

  auto outer = [](int i, int n) { return i % n; };
  auto inner = [](int i, int n) { return n + i % n; };
  for (int i = 0; i < n; ++i) obj.springs.push_back(make_spring(obj.particles, outer(i, n), outer(i + 1, n), material));
  for (int i = 0; i < n; ++i) obj.springs.push_back(make_spring(obj.particles, inner(i, n), inner(i + 1, n), material));
  for (int i = 0; i < n; ++i) obj.springs.push_back(make_spring(obj.particles, outer(i, n), inner(i, n), material));
  for (int i = 0; i < n; ++i) {
    obj.springs.push_back(make_spring(obj.particles, outer(i, n), inner(i + 1, n), material));
    obj.springs.push_back(make_spring(obj.particles, outer(i + 1, n), inner(i, n), material));
  }

  for (int i = 0; i < n; ++i) obj.faces.push_back(Face::edge(outer(i, n), outer(i + 1, n), Layer::Outer));
  for (int i = 0; i < n; ++i) obj.faces.push_back(Face::edge(inner(i, n), inner(i + 1, n), Layer::Inner));

  finish_layers(obj, nrt_outer, nrt_inner);
  return obj;
}

TriangleMesh subdivide_icosphere(int depth) {
  require(depth >= 0 && depth <= kMaxIcosphereDepth,
          "icosphere depth must lie in [0, " + std::to_string(kMaxIcosphereDepth) + "]");

  const double t = std::numbers::phi;
  TriangleMesh mesh;
  mesh.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                   {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : mesh.vertices) v = v / norm(v);
  mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < depth; ++level) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto [it, inserted] = midpoints.try_emplace(key, static_cast<int>(mesh.vertices.size()));
      if (inserted) {
        const Vec3 m = 0.5 * (mesh.vertices[static_cast<std::size_t>(a)] +
                              mesh.vertices[static_cast<std::size_t>(b)]);
        mesh.vertices.push_back(m / norm(m));
      }
      return it->second;
    };

    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& [a, b, c] : mesh.triangles) {
      const int ab = midpoint(a, b);
      const int bc = midpoint(b, c);
      const int ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }
  return mesh;
}

std::vector<std::array<int, 2>> mesh_edges(const TriangleMesh& mesh) {
  std::set<std::pair<int, int>> seen;
  std::vector<std::array<int, 2>> edges;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const auto [lo, hi] = std::minmax(tri[static_cast<std::size_t>(k)],
                                        tri[static_cast<std::size_t>((k + 1) % 3)]);
      if (seen.emplace(lo, hi).second) edges.push_back({lo, hi});
    }
  }
  return edges;
}

ElasticObject build_two_layer_sphere(int depth, double r_outer, double inner_ratio, double mass,
                                     SpringMaterial material, double nrt_outer,
                                     double nrt_inner) {
  check_layered(r_outer, inner_ratio, mass, nrt_outer, nrt_inner);
  check_material(material);
  const TriangleMesh mesh = subdivide_icosphere(depth);
  const auto edges = mesh_edges(mesh);

  ElasticObject obj;
  obj.dimension = Dimension::D3;
  const int n = static_cast<int>(mesh.vertices.size());
  const double particle_mass = mass / (2.0 * n);
  for (double radius : {r_outer, inner_ratio * r_outer}) {
    for (const Vec3& v : mesh.vertices) add_particle(obj, radius * v, particle_mass);
  }

  for (int shell : {0, n}) {
    for (const auto& [i, j] : edges) obj.springs.push_back(make_spring(obj.particles, shell + i, shell + j, material));
  }
  for (int i = 0; i < n; ++i) obj.springs.push_back(make_spring(obj.particles, i, n + i, material));
  for (const auto& [i, j] : edges) {
    obj.springs.push_back(make_spring(obj.particles, i, n + j, material));
    obj.springs.push_back(make_spring(obj.particles, j, n + i, material));
  }

  for (const auto& [a, b, c] : mesh.triangles) obj.faces.push_back(Face::triangle(a, b, c, Layer::Outer));
  for (const auto& [a, b, c] : mesh.triangles) obj.faces.push_back(Face::triangle(n + a, n + b, n + c, Layer::Inner));

  finish_layers(obj, nrt_outer, nrt_inner);
  return obj;
}

void translate(ElasticObject& object, const Vec3& offset) {
  for (auto& p : object.particles) p.position += offset;
}

int link_objects(WorldState& world, int object_a, int particle_a, int object_b, int particle_b,
                 SpringMaterial material) {
  if (object_a == object_b) {
    throw Error(ErrorCode::SelfLink, "cannot link object " + std::to_string(object_a) + " to itself");
  }
  check_material(material);
  const Vec3 pa = world.particle(object_a, particle_a).position;
  const Vec3 pb = world.particle(object_b, particle_b).position;

  LinkSpring link;
  link.object_a = object_a;
  link.object_b = object_b;
  link.spring = {particle_a, particle_b, material.stiffness, material.damping, distance(pa, pb)};
  world.links.push_back(link);
  return static_cast<int>(world.links.size()) - 1;
}

}  // namespace softbody
