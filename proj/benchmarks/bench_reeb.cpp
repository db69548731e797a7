#include <benchmark/benchmark.h>

#include "symreeb/fixtures.hpp"
#include "symreeb/reeb.hpp"

using namespace symreeb;

static void BM_BuildReebFlatTorus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TriMeshField m = fixtures::flat_torus(n, fixtures::GridPattern::Diagonal, fixtures::wave_field);
  for (auto _ : state) benchmark::DoNotOptimize(build_reeb(m));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.triangles.size()));
}
BENCHMARK(BM_BuildReebFlatTorus)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_BuildReebSphere(benchmark::State& state) {
  const TriMeshField m = fixtures::sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_reeb(m));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.triangles.size()));
}
BENCHMARK(BM_BuildReebSphere)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_BuildReebPretzel(benchmark::State& state) {
  const TriMeshField m = fixtures::pretzel_theta();
  for (auto _ : state) benchmark::DoNotOptimize(build_reeb(m));
}
BENCHMARK(BM_BuildReebPretzel)->Unit(benchmark::kMicrosecond);
