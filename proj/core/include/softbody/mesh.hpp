#pragma once

#include <array>
#include <vector>

#include "softbody/world.hpp"

namespace softbody {

/// Material shared by every spring of a built object.
struct SpringMaterial {
  double stiffness = 0.0;
  double damping = 0.0;
};

/// Horizontal 1D chain of `n` particles centred on the origin.
ElasticObject build_chain(int n, double length, double mass, SpringMaterial material);

/// Two concentric rings (outer radius `r_outer`, inner `inner_ratio * r_outer`) in the z = 0
/// plane, joined by radial spokes and crossed diagonals. Both rings are counterclockwise.
ElasticObject build_two_layer_disc(int n_outer, double r_outer, double inner_ratio, double mass,
                                   SpringMaterial material, double nrt_outer, double nrt_inner);

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

inline constexpr int kMaxIcosphereDepth = 5;

/// Unit icosphere: icosahedron split `depth` times with midpoints projected back onto the
/// sphere. Triangles wind counterclockwise seen from outside.
TriangleMesh subdivide_icosphere(int depth);

/// Unique undirected edges of a triangle mesh, as (lo, hi) pairs in first-seen order.
std::vector<std::array<int, 2>> mesh_edges(const TriangleMesh& mesh);

/// Outer shell from `subdivide_icosphere(depth)` scaled by `r_outer`, inner shell scaled by
/// `inner_ratio * r_outer`, cross-linked radially and along every mesh edge.
ElasticObject build_two_layer_sphere(int depth, double r_outer, double inner_ratio, double mass,
                                     SpringMaterial material, double nrt_outer,
                                     double nrt_inner);

void translate(ElasticObject& object, const Vec3& offset);

/// Adds a spring between two particles of different objects, at rest at their current
/// distance. Returns the index of the new link in `world.links`.
int link_objects(WorldState& world, int object_a, int particle_a, int object_b, int particle_b,
                 SpringMaterial material);

}  // namespace softbody
