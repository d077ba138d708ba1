#include <benchmark/benchmark.h>

#include "softbody/mesh.hpp"
#include "softbody/scene.hpp"
#include "softbody/session.hpp"

using namespace softbody;

namespace {

// Two-layer sphere at subdivision depth 1 (84 particles) or 2 (324 particles).
void BM_SessionTick(benchmark::State& state) {
  const SceneConfig scene = load_scene(state.range(0) == 2 ? SOFTBODY_DATA_DIR "/scenes/sphere_fine.json"
                                                     : SOFTBODY_DATA_DIR "/scenes/sphere.json");
  Session session(scene);
  session.start_simulation();
  for (auto _ : state) benchmark::DoNotOptimize(session.tick(scene.dt));
  state.counters["ticks/s"] = benchmark::Counter(static_cast<double>(state.iterations()), benchmark::Counter::kIsRate);
  state.counters["particles"] = static_cast<double>(session.world().objects[0].particles.size());
}
BENCHMARK(BM_SessionTick)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_TotalForce(benchmark::State& state) {
  WorldState w;
  w.add_object(build_two_layer_sphere(2, 1.0, 0.6, 4.0, {60.0, 0.5}, 8.0, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(total_force(w, {}));
}
BENCHMARK(BM_TotalForce)->Unit(benchmark::kMicrosecond);

void BM_NearestParticle(benchmark::State& state) {
  WorldState w;
  w.add_object(build_two_layer_sphere(2, 1.0, 0.6, 4.0, {60.0, 0.5}, 8.0, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(nearest_particle(w, {0.3, 0.9, -0.2}));
}
BENCHMARK(BM_NearestParticle);

}  // namespace
