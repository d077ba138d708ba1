#include "softbody/world.hpp"

#include <algorithm>
#include <string>

#include "softbody/error.hpp"

namespace softbody {

Vec3 Bounds::clamp(const Vec3& p) const {
  return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
          std::clamp(p.z, min.z, max.z)};
}

bool Bounds::contains(const Vec3& p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
         p.z <= max.z;
}

double Bounds::max_extent() const {
  const Vec3 e = extent();
  return std::max({e.x, e.y, e.z});
}

int WorldState::add_object(ElasticObject object) {
  object.id = static_cast<int>(objects.size());
  objects.push_back(std::move(object));
  return objects.back().id;
}

ElasticObject& WorldState::object(int id) {
  if (id < 0 || id >= static_cast<int>(objects.size())) {
    throw Error(ErrorCode::UnknownObject, "unknown object " + std::to_string(id));
  }
  return objects[static_cast<std::size_t>(id)];
}

const ElasticObject& WorldState::object(int id) const {
  return const_cast<WorldState&>(*this).object(id);
}

Particle& WorldState::particle(int object_id, int particle_id) {
  ElasticObject& obj = object(object_id);
  if (particle_id < 0 || particle_id >= static_cast<int>(obj.particles.size())) {
    throw Error(ErrorCode::UnknownParticle, "unknown particle " + std::to_string(particle_id) +
                                                " in object " + std::to_string(object_id));
  }
  return obj.particles[static_cast<std::size_t>(particle_id)];
}

const Particle& WorldState::particle(int object_id, int particle_id) const {
  return const_cast<WorldState&>(*this).particle(object_id, particle_id);
}

std::size_t WorldState::particle_count() const {
  std::size_t n = 0;
  for (const auto& obj : objects) n += obj.particles.size();
  return n;
}

}  // namespace softbody
