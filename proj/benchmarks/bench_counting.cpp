#include <benchmark/benchmark.h>

#include <random>

#include "weylab/heatkernel.hpp"
#include "weylab/phase.hpp"
#include "weylab/spectral.hpp"

using namespace weylab;

static void BM_SturmCount(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> d(n), e(n - 1);
  for (auto& x : d) x = u(rng);
  for (auto& x : e) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(sturm_count(d, e, 0.1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_SturmCount)->RangeMultiplier(10)->Range(100, 1'000'000);

static void BM_CountLineOscillator(benchmark::State& state) {
  const auto V = PotentialModel::power(2.0, 0.0);
  const double lambda = static_cast<double>(state.range(0)) + 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(count_line(V, lambda, MeshControl{0.05, 8, 0.0}));
}
BENCHMARK(BM_CountLineOscillator)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_PhiH3(benchmark::State& state) {
  const auto g = GeometryModel::hyperbolic3();
  const auto V = PotentialModel::power(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(phi(g, V, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_PhiH3)->Arg(25)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_H3KernelMass(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(h3_kernel_mass(1.0));
}
BENCHMARK(BM_H3KernelMass)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
