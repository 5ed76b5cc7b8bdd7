#include <benchmark/benchmark.h>

#include "flowroute/cost.hpp"

namespace {

using namespace flowroute;

void BM_EdgeTravelTimeJet(benchmark::State& state) {
  const JetField f;
  StepControl ctl;
  ctl.tol = 1.0 / static_cast<double>(state.range(0));
  const VehicleSpec veh;
  std::uint64_t cmc = 0;
  for (auto _ : state) {
    const EdgeCost e = edge_travel_time(f, {2.0, 0.4}, {3.2, -0.4}, 5.0, veh, ctl);
    cmc += e.cmc;
    benchmark::DoNotOptimize(e.travel_time);
  }
  state.counters["cmc_per_edge"] = benchmark::Counter(static_cast<double>(cmc), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_EdgeTravelTimeJet)->Arg(100)->Arg(1000)->Arg(100000);

void BM_EdgeTravelTimeUniform(benchmark::State& state) {
  const UniformField f({0.1, -0.2});
  const StepControl ctl;
  const VehicleSpec veh;
  for (auto _ : state) benchmark::DoNotOptimize(edge_travel_time(f, {0, 0}, {1.2, 0.8}, 0.0, veh, ctl).travel_time);
}
BENCHMARK(BM_EdgeTravelTimeUniform);

void BM_JetSample(benchmark::State& state) {
  const JetField f;
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.sample({x, 0.3}, 0.0, 2.0).u);
    x = x < 10.0 ? x + 0.01 : 0.0;
  }
}
BENCHMARK(BM_JetSample);

}  // namespace
