#include <benchmark/benchmark.h>

#include "softbody/ahp.hpp"

using namespace softbody;

namespace {

void BM_PriorityVector(benchmark::State& state) {
  const auto m = ahp::read_matrix_csv(std::string(SOFTBODY_DATA_DIR "/ahp/value_matrix.csv"));
  for (auto _ : state) benchmark::DoNotOptimize(ahp::priority_vector(m));
}
BENCHMARK(BM_PriorityVector);

void BM_ReadMatrixCsv(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ahp::read_matrix_csv(std::string(SOFTBODY_DATA_DIR "/ahp/cost_matrix.csv")));
}
BENCHMARK(BM_ReadMatrixCsv);

}  // namespace
