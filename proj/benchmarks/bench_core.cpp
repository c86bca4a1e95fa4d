#include "spatavg/spatavg.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace spatavg;

SyntheticData make_data(Eigen::Index n, Eigen::Index steps) {
  SynthConfig cfg;
  cfg.n_sites = n;
  cfg.n_steps = steps;
  cfg.sigma_eps = 0.2;
  cfg.seed = 3;
  return generate_synthetic(cfg);
}

void BM_EstimateMoments(benchmark::State& state) {
  const SyntheticData d = make_data(state.range(0), 365);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_moments(d.panel, d.truth, NoiseModel(0.2), AvailabilityModel(0.8)));
  }
}
BENCHMARK(BM_EstimateMoments)->Arg(20)->Arg(100)->Arg(400);

void BM_SolveMse(benchmark::State& state) {
  const SyntheticData d = make_data(state.range(0), 365);
  const AvailabilityModel av(0.8);
  const MomentSet m = estimate_moments(d.panel, d.truth, NoiseModel(0.2), av);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_mse(m, av));
}
BENCHMARK(BM_SolveMse)->Arg(20)->Arg(100)->Arg(200);

void BM_Simulate(benchmark::State& state) {
  const SyntheticData d = make_data(30, 365);
  SimConfig cfg;
  cfg.n_realizations = state.range(0);
  cfg.seed = 1;
  const WeightVector w = WeightVector::uniform(30);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(d.panel, d.truth, w, AvailabilityModel(0.7), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_EnumerateExact(benchmark::State& state) {
  const auto n = state.range(0);
  const SyntheticData d = make_data(n, 120);
  const WeightVector w = WeightVector::uniform(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_exact(d.panel, d.truth, w, AvailabilityModel(0.6)));
  }
}
BENCHMARK(BM_EnumerateExact)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
