#include <benchmark/benchmark.h>

#include "qlink/capacity.hpp"
#include "qlink/distributed.hpp"
#include "qlink/optimizer.hpp"

namespace {

qlink::LinkSetup setup_for(double length_km, int amps, qlink::Scenario scenario) {
  qlink::LinkSetup s;
  s.length_km = length_km;
  s.amp_count = amps;
  s.photon_budget = 100.0;
  s.scenario = scenario;
  return s;
}

void BM_EquidistantPlan(benchmark::State& state) {
  const auto setup = setup_for(500.0, static_cast<int>(state.range(0)),
                               qlink::Scenario::ConventionalSNL);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qlink::equidistant_saturating_plan(setup));
  }
}
BENCHMARK(BM_EquidistantPlan)->Arg(10)->Arg(100)->Arg(1000);

void BM_OptimizeConventional(benchmark::State& state) {
  const auto setup = setup_for(1000.0, static_cast<int>(state.range(0)),
                               qlink::Scenario::ConventionalSNL);
  for (auto _ : state) benchmark::DoNotOptimize(qlink::optimize_plan(setup));
}
BENCHMARK(BM_OptimizeConventional)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_GhCapacity(benchmark::State& state) {
  const auto setup = setup_for(1000.0, static_cast<int>(state.range(0)),
                               qlink::Scenario::GordonHolevo);
  const auto plan =
      qlink::to_link_plan(setup, qlink::equidistant_saturating_plan(setup));
  for (auto _ : state) benchmark::DoNotOptimize(qlink::gh_capacity(plan));
}
BENCHMARK(BM_GhCapacity)->Arg(0)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_IntegratePsa(benchmark::State& state) {
  const double length = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qlink::integrate_psa(length, 100.0, 0.2));
  }
}
BENCHMARK(BM_IntegratePsa)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
