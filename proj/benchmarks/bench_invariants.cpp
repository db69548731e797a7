#include <benchmark/benchmark.h>

#include "symreeb/circulation.hpp"
#include "symreeb/fixtures.hpp"
#include "symreeb/invariants.hpp"

using namespace symreeb;

static void BM_EdgeMoments(benchmark::State& state) {
  const auto g = build_reeb(fixtures::flat_torus(128, fixtures::GridPattern::Diagonal, fixtures::wave_field)).graph;
  const int lmax = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (const auto& e : g.edges) benchmark::DoNotOptimize(edge_moments(g, e.id, lmax));
  }
}
BENCHMARK(BM_EdgeMoments)->Arg(4)->Arg(16);

static void BM_SaddleFit(benchmark::State& state) {
  const auto g = build_reeb(fixtures::flat_torus(256, fixtures::GridPattern::Diagonal, fixtures::wave_field)).graph;
  int saddle = 0;
  for (const auto& v : g.vertices)
    if (v.kind == CriticalKind::Saddle) saddle = v.id;
  for (auto _ : state) benchmark::DoNotOptimize(fit_saddle(g, saddle));
}
BENCHMARK(BM_SaddleFit);

static void BM_Isomorphism(benchmark::State& state) {
  const auto g = build_reeb(fixtures::flat_torus(64, fixtures::GridPattern::Diagonal, fixtures::two_maxima_field)).graph;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_isomorphisms(g, g, 1e-9, 1e-9, 1e-9));
}
BENCHMARK(BM_Isomorphism);

static void BM_CirculationFunction(benchmark::State& state) {
  auto m = zero_mean(fixtures::flat_torus(128, fixtures::GridPattern::Diagonal, fixtures::wave_field));
  const Topology topo = build_topology(m);
  m.cochain = make_cochain(topo, exact_primitive(m, topo));
  const auto r = build_reeb(m);
  for (auto _ : state) benchmark::DoNotOptimize(circulation_function(m, r.graph, r.projection));
}
BENCHMARK(BM_CirculationFunction)->Unit(benchmark::kMillisecond);
