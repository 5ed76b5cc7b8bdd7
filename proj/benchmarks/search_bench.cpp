#include <benchmark/benchmark.h>

#include <string>

#include "flowroute/search.hpp"

namespace {

using namespace flowroute;

// One start of the five-start jet layout: box [0,10]x[-3.2,3.2], cell 0.4, 3 sectors.
void BM_PlanJet(benchmark::State& state) {
  const Algorithm algo = kAllAlgorithms[state.range(0)];
  const JetField f;
  const GeoGraph g = build_sector_grid({{0, -3.2, 10, 3.2}, 0.4, 3});
  const VertexId src = g.nearest_vertex({2.0, 0.0});
  const VertexId goal = g.nearest_vertex({9.6, -2.8});
  const VehicleSpec veh;
  const StepControl ctl;
  SearchOptions opt = SearchOptions::for_algorithm(algo);
  opt.v_current_max = max_current_speed(f, {0, -3.2, 10, 3.2}, {0, 40}).speed;
  PlanStats stats;
  for (auto _ : state) {
    const SearchResult r = plan(g, f, src, goal, veh, ctl, opt);
    stats = r.stats;
    benchmark::DoNotOptimize(r.route.goal_arrival());
  }
  state.SetLabel(std::string(to_string(algo)));
  state.counters["cfc"] = static_cast<double>(stats.cfc);
  state.counters["cmc"] = static_cast<double>(stats.cmc);
}
BENCHMARK(BM_PlanJet)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_BuildSectorGrid(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_sector_grid({{0, -3.2, 10, 3.2}, 0.4, static_cast<int>(state.range(0))}).edge_count());
  }
}
BENCHMARK(BM_BuildSectorGrid)->DenseRange(1, 3);

}  // namespace
