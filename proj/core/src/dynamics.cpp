#include "softbody/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include <spdlog/spdlog.h>

#include "softbody/error.hpp"

namespace softbody {
namespace {

double signed_measure(const ElasticObject& object, Layer layer) {
  double sum = 0.0;
  const auto pos = [&](int id) -> const Vec3& {
    return object.particles[static_cast<std::size_t>(id)].position;
  };
  for (const Face& f : object.faces) {
    if (f.layer != layer) continue;
    if (f.arity == 2) {
      const Vec3& a = pos(f.ids[0]);
      const Vec3& b = pos(f.ids[1]);
      sum += 0.5 * (a.x * b.y - b.x * a.y);
    } else {
      sum += dot(pos(f.ids[0]), cross(pos(f.ids[1]), pos(f.ids[2]))) / 6.0;
    }
  }
  return sum;
}

// Every directed edge must be matched by exactly one reversed edge. For 2D loops the faces
// are themselves the edges, so each vertex needs one outgoing and one incoming edge.
bool layer_is_closed(const ElasticObject& object, Layer layer) {
  std::map<std::pair<int, int>, int> directed;
  bool any = false;
  for (const Face& f : object.faces) {
    if (f.layer != layer) continue;
    any = true;
    if (f.arity == 2) {
      ++directed[{f.ids[0], -1}];
      ++directed[{-1, f.ids[1]}];
      continue;
    }
    for (int k = 0; k < 3; ++k) ++directed[{f.ids[static_cast<std::size_t>(k)], f.ids[static_cast<std::size_t>((k + 1) % 3)]}];
  }
  if (!any) return false;
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    const auto reverse = directed.find({edge.second, edge.first});
    if (reverse == directed.end() || reverse->second != 1) return false;
  }
  return true;
}

void add_spring_force(Particle& pa, Particle& pb, const Spring& s, std::size_t& degenerate) {
  const Vec3 d = pb.position - pa.position;
  const double length = norm(d);
  if (length < kDegenerateSpringLength) {
    ++degenerate;
    return;
  }
  const Vec3 dir = d / length;
  const double scalar =
      s.stiffness * (length - s.rest_length) + s.damping * dot(pb.velocity - pa.velocity, dir);
  const Vec3 f = scalar * dir;
  pa.force += f;
  pb.force -= f;
}

struct BoundingSphere {
  Vec3 center;
  double radius = 0.0;
};

BoundingSphere bounding_sphere(const ElasticObject& obj) {
  BoundingSphere s;
  if (obj.particles.empty()) return s;
  for (const auto& p : obj.particles) s.center += p.position;
  s.center = s.center / static_cast<double>(obj.particles.size());
  for (const auto& p : obj.particles) s.radius = std::max(s.radius, distance(s.center, p.position));
  return s;
}

// Particles of `intruder` inside `host`'s bounding sphere are pushed out radially; the
// nearest particle of `host` takes the opposite force.
void penalize(ElasticObject& intruder, ElasticObject& host, const BoundingSphere& sphere,
              double stiffness) {
  for (auto& p : intruder.particles) {
    const Vec3 offset = p.position - sphere.center;
    const double r = norm(offset);
    if (r >= sphere.radius || r < kDegenerateSpringLength) continue;
    const Vec3 f = (stiffness * (sphere.radius - r) / r) * offset;

    Particle* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (auto& q : host.particles) {
      const double dq = distance(q.position, p.position);
      if (dq < best) {
        best = dq;
        nearest = &q;
      }
    }
    p.force += f;
    nearest->force -= f;
  }
}

struct State {
  std::vector<Vec3> x;
  std::vector<Vec3> v;

  void resize(std::size_t n) {
    x.resize(n);
    v.resize(n);
  }
};

State gather(const WorldState& world) {
  State s;
  s.x.reserve(world.particle_count());
  s.v.reserve(world.particle_count());
  for (const auto& obj : world.objects) {
    for (const auto& p : obj.particles) {
      s.x.push_back(p.position);
      s.v.push_back(p.velocity);
    }
  }
  return s;
}

void scatter(WorldState& world, const State& s) {
  std::size_t i = 0;
  for (auto& obj : world.objects) {
    for (auto& p : obj.particles) {
      if (!p.fixed) {
        p.position = s.x[i];
        p.velocity = s.v[i];
      }
      ++i;
    }
  }
}

// Loads `s` into the world, accumulates forces and writes dy/dt into `out`.
Vec3 derivative(WorldState& world, const State& s, const ForceInputs& inputs, State& out) {
  scatter(world, s);
  const Vec3 drag = accumulate_forces(world, inputs);
  out.resize(s.x.size());
  std::size_t i = 0;
  for (const auto& obj : world.objects) {
    for (const auto& p : obj.particles) {
      if (p.fixed) {
        out.x[i] = {};
        out.v[i] = {};
      } else {
        out.x[i] = p.velocity;
        out.v[i] = p.force / p.mass;
      }
      ++i;
    }
  }
  return drag;
}

// out = base + h * d
void axpy(const State& base, double h, const State& d, State& out) {
  out.resize(base.x.size());
  for (std::size_t i = 0; i < base.x.size(); ++i) {
    out.x[i] = base.x[i] + h * d.x[i];
    out.v[i] = base.v[i] + h * d.v[i];
  }
}

std::vector<Vec3> save_forces(const WorldState& world) {
  std::vector<Vec3> f;
  f.reserve(world.particle_count());
  for (const auto& obj : world.objects) {
    for (const auto& p : obj.particles) f.push_back(p.force);
  }
  return f;
}

void restore_forces(WorldState& world, const std::vector<Vec3>& f) {
  std::size_t i = 0;
  for (auto& obj : world.objects) {
    for (auto& p : obj.particles) p.force = f[i++];
  }
}

bool blown_up(const State& s, double limit) {
  const auto bad = [limit](const Vec3& a) {
    return !is_finite(a) || std::abs(a.x) > limit || std::abs(a.y) > limit || std::abs(a.z) > limit;
  };
  return std::any_of(s.x.begin(), s.x.end(), bad) || std::any_of(s.v.begin(), s.v.end(), bad);
}

}  // namespace

std::string_view integrator_name(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::Euler: return "euler";
    case IntegratorKind::Midpoint: return "midpoint";
    case IntegratorKind::RungeKutta4: return "rk4";
  }
  return "euler";
}

std::optional<IntegratorKind> parse_integrator(std::string_view name) {
  if (name == "euler") return IntegratorKind::Euler;
  if (name == "midpoint") return IntegratorKind::Midpoint;
  if (name == "rk4") return IntegratorKind::RungeKutta4;
  return std::nullopt;
}

void clear_forces(WorldState& world) {
  for (auto& obj : world.objects) {
    for (auto& p : obj.particles) p.force = {};
  }
}

void apply_gravity(WorldState& world) {
  const Vec3 g = world.params.gravity;
  for (auto& obj : world.objects) {
    for (auto& p : obj.particles) {
      if (!p.fixed) p.force += p.mass * g;
    }
  }
}

std::size_t apply_spring_forces(WorldState& world) {
  std::size_t degenerate = 0;
  for (auto& obj : world.objects) {
    for (const auto& s : obj.springs) {
      add_spring_force(obj.particles[static_cast<std::size_t>(s.a)],
                       obj.particles[static_cast<std::size_t>(s.b)], s, degenerate);
    }
  }
  for (const auto& link : world.links) {
    add_spring_force(world.particle(link.object_a, link.spring.a),
                     world.particle(link.object_b, link.spring.b), link.spring, degenerate);
  }
  if (degenerate > 0) {
    spdlog::warn("{} degenerate spring(s) shorter than {} m skipped at t={}", degenerate,
                 kDegenerateSpringLength, world.clock);
  }
  return degenerate;
}

double enclosed_measure(const ElasticObject& object, Layer layer) {
  if (!layer_is_closed(object, layer)) {
    throw Error(ErrorCode::OpenBoundary,
                std::string("layer ") + (layer == Layer::Outer ? "outer" : "inner") +
                    " of object " + std::to_string(object.id) + " is not closed");
  }
  return signed_measure(object, layer);
}

void apply_pressure_forces(WorldState& world) {
  for (auto& obj : world.objects) {
    for (const auto& [layer, nrt] : obj.pressure) {
      if (nrt == 0.0) continue;
      // Layers carrying an initial measure were validated as closed at construction and
      // their topology never changes.
      const auto initial = obj.initial_measure.find(layer);
      double measure = initial != obj.initial_measure.end() ? signed_measure(obj, layer)
                                                            : enclosed_measure(obj, layer);
      if (initial != obj.initial_measure.end()) {
        const double floor = kCollapseFraction * initial->second;
        if (measure < floor) {
          spdlog::warn("object {} layer {} collapsed (measure {}), pressure capped", obj.id,
                       layer == Layer::Outer ? "outer" : "inner", measure);
          measure = floor;
        }
      }
      const double pressure = nrt / measure;
      for (const Face& f : obj.faces) {
        if (f.layer != layer) continue;
        auto& pa = obj.particles[static_cast<std::size_t>(f.ids[0])];
        auto& pb = obj.particles[static_cast<std::size_t>(f.ids[1])];
        if (f.arity == 2) {
          // Outward normal of a counterclockwise edge scaled by its length.
          const Vec3 d = pb.position - pa.position;
          const Vec3 share = (0.5 * pressure) * Vec3{d.y, -d.x, 0.0};
          pa.force += share;
          pb.force += share;
        } else {
          auto& pc = obj.particles[static_cast<std::size_t>(f.ids[2])];
          const Vec3 area_normal =
              0.5 * cross(pb.position - pa.position, pc.position - pa.position);
          const Vec3 share = (pressure / 3.0) * area_normal;
          pa.force += share;
          pb.force += share;
          pc.force += share;
        }
      }
    }
  }
}

Vec3 apply_drag_force(WorldState& world, const DragHandle& handle) {
  Particle* p = nullptr;
  try {
    p = &world.particle(handle.object, handle.particle);
  } catch (const Error&) {
    throw Error(ErrorCode::StaleHandle, "drag handle refers to a particle that no longer exists");
  }
  const Vec3 f = handle.k_drag * (handle.target - p->position) - handle.c_drag * p->velocity;
  p->force += f;
  return f;
}

void apply_external_forces(WorldState& world, std::span<const ExternalForce> forces) {
  for (const auto& e : forces) world.particle(e.object, e.particle).force += e.force;
}

void apply_collision_penalties(WorldState& world) {
  const double k = world.params.collision_stiffness;
  if (k == 0.0 || world.objects.size() < 2) return;
  std::vector<BoundingSphere> spheres;
  spheres.reserve(world.objects.size());
  for (const auto& obj : world.objects) spheres.push_back(bounding_sphere(obj));

  for (std::size_t i = 0; i < world.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < world.objects.size(); ++j) {
      if (distance(spheres[i].center, spheres[j].center) >= spheres[i].radius + spheres[j].radius) continue;
      penalize(world.objects[i], world.objects[j], spheres[j], k);
      penalize(world.objects[j], world.objects[i], spheres[i], k);
    }
  }
}

void project_to_bounds(WorldState& world) {
  const Bounds& b = world.params.bounds;
  const double e = world.params.restitution;
  const auto axis = [e](double& x, double& v, double lo, double hi) {
    if (x < lo) {
      x = lo;
      if (v < 0.0) v = -e * v;
    } else if (x > hi) {
      x = hi;
      if (v > 0.0) v = -e * v;
    }
  };
  for (auto& obj : world.objects) {
    for (auto& p : obj.particles) {
      if (p.fixed) continue;
      axis(p.position.x, p.velocity.x, b.min.x, b.max.x);
      axis(p.position.y, p.velocity.y, b.min.y, b.max.y);
      axis(p.position.z, p.velocity.z, b.min.z, b.max.z);
    }
  }
}

void resolve_collisions(WorldState& world) {
  project_to_bounds(world);
  apply_collision_penalties(world);
}

Vec3 accumulate_forces(WorldState& world, const ForceInputs& inputs) {
  clear_forces(world);
  apply_gravity(world);
  apply_spring_forces(world);
  apply_pressure_forces(world);
  Vec3 drag;
  if (inputs.drag && inputs.drag->active) drag = apply_drag_force(world, *inputs.drag);
  apply_external_forces(world, inputs.external);
  apply_collision_penalties(world);
  return drag;
}

ForceBreakdown total_force(WorldState& world, const ForceInputs& inputs) {
  ForceBreakdown out;
  out.objects.resize(world.objects.size());
  for (std::size_t o = 0; o < world.objects.size(); ++o) {
    out.objects[o].resize(world.objects[o].particles.size());
  }

  const auto capture = [&](ForceSource source, auto&& apply) {
    clear_forces(world);
    apply();
    for (std::size_t o = 0; o < world.objects.size(); ++o) {
      for (std::size_t i = 0; i < world.objects[o].particles.size(); ++i) {
        out.objects[o][i].by_source[static_cast<std::size_t>(source)] = world.objects[o].particles[i].force;
      }
    }
  };

  // Pipeline order; totals are summed in the same order.
  constexpr std::array order{ForceSource::Gravity, ForceSource::Spring,   ForceSource::Pressure,
                             ForceSource::Mouse,   ForceSource::External, ForceSource::Collision};
  capture(ForceSource::Gravity, [&] { apply_gravity(world); });
  capture(ForceSource::Spring, [&] { apply_spring_forces(world); });
  capture(ForceSource::Pressure, [&] { apply_pressure_forces(world); });
  capture(ForceSource::Mouse, [&] {
    if (inputs.drag && inputs.drag->active) apply_drag_force(world, *inputs.drag);
  });
  capture(ForceSource::External, [&] { apply_external_forces(world, inputs.external); });
  capture(ForceSource::Collision, [&] { apply_collision_penalties(world); });

  for (std::size_t o = 0; o < world.objects.size(); ++o) {
    for (std::size_t i = 0; i < world.objects[o].particles.size(); ++i) {
      auto& entry = out.objects[o][i];
      Vec3 total;
      for (ForceSource s : order) total += entry[s];
      entry.total = total;
      world.objects[o].particles[i].force = total;
    }
  }
  return out;
}

StepReport step(WorldState& world, double dt, IntegratorKind kind, const ForceInputs& inputs) {
  if (!(dt > 0.0 && dt <= kMaxDt)) {
    throw Error(ErrorCode::InvalidArgument, "dt must lie in (0, " + std::to_string(kMaxDt) + "]");
  }

  const State y0 = gather(world);
  State k1, k2, k3, k4, tmp, y;
  StepReport report;
  report.drag_force = derivative(world, y0, inputs, k1);
  const std::vector<Vec3> start_forces = save_forces(world);

  switch (kind) {
    case IntegratorKind::Euler:
      axpy(y0, dt, k1, y);
      break;
    case IntegratorKind::Midpoint:
      axpy(y0, 0.5 * dt, k1, tmp);
      derivative(world, tmp, inputs, k2);
      axpy(y0, dt, k2, y);
      break;
    case IntegratorKind::RungeKutta4:
      axpy(y0, 0.5 * dt, k1, tmp);
      derivative(world, tmp, inputs, k2);
      axpy(y0, 0.5 * dt, k2, tmp);
      derivative(world, tmp, inputs, k3);
      axpy(y0, dt, k3, tmp);
      derivative(world, tmp, inputs, k4);
      y.resize(y0.x.size());
      for (std::size_t i = 0; i < y0.x.size(); ++i) {
        y.x[i] = y0.x[i] + (dt / 6.0) * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
        y.v[i] = y0.v[i] + (dt / 6.0) * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
      }
      break;
  }

  restore_forces(world, start_forces);
  if (blown_up(y, kBlowupFactor * world.params.bounds.max_extent())) {
    scatter(world, y0);
    spdlog::error("numerical blow-up at t={} (dt={}, integrator={}), step rolled back",
                  world.clock, dt, integrator_name(kind));
    throw Error(ErrorCode::NumericalBlowup,
                "numerical blow-up at t=" + std::to_string(world.clock) + " with dt=" +
                    std::to_string(dt) + "; step rolled back");
  }
  scatter(world, y);
  project_to_bounds(world);
  world.clock += dt;
  return report;
}

}  // namespace softbody
