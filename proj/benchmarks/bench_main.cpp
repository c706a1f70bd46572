#include <cmath>

#include <benchmark/benchmark.h>

#include "mohardy/families.hpp"
#include "mohardy/norms.hpp"
#include "mohardy/tent_atoms.hpp"

using namespace mohardy;

namespace {

HalfSpaceGrid levels_for(int cells) {
  return HalfSpaceGrid(SpatialGrid(1, 32.0, cells), 0.125, std::exp2(1.0 / 7.0), 57);
}

void BM_AreaFunctional(benchmark::State& state) {
  const auto hs = levels_for(static_cast<int>(state.range(0)));
  const auto f = random_tent_functions(hs, 1, 3).front();
  for (auto _ : state) benchmark::DoNotOptimize(area_functional(f));
}
BENCHMARK(BM_AreaFunctional)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);

void BM_LuxembourgNorm(benchmark::State& state) {
  const SpatialGrid g(1, 32.0, static_cast<int>(state.range(0)));
  const auto phi = GrowthFunction::log_family(1, 1.0, 1.0, 1.0);
  const auto f = wave_packet(g, 1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(luxembourg_norm(phi, g, f));
}
BENCHMARK(BM_LuxembourgNorm)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMicrosecond);

void BM_Decompose(benchmark::State& state) {
  const auto hs = levels_for(static_cast<int>(state.range(0)));
  const auto f = random_tent_functions(hs, 1, 5).front();
  const auto phi = GrowthFunction::identity(1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(f, phi));
}
BENCHMARK(BM_Decompose)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
