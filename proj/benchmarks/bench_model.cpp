#include <benchmark/benchmark.h>

#include "magnomech/gaussian.hpp"
#include "magnomech/model.hpp"
#include "magnomech/sweep.hpp"

namespace {

using namespace magnomech;

void BM_is_hurwitz(benchmark::State& state) {
  const auto a = build_drift(PhysicalParams::baseline());
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian::is_hurwitz(a).is_hurwitz);
  }
}
BENCHMARK(BM_is_hurwitz);

void BM_solve_lyapunov(benchmark::State& state) {
  const PhysicalParams p = PhysicalParams::baseline();
  const auto a = build_drift(p);
  const auto d = build_diffusion(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian::solve_lyapunov(a, d).sum());
  }
}
BENCHMARK(BM_solve_lyapunov);

void BM_compute_entanglement(benchmark::State& state) {
  const PhysicalParams p = PhysicalParams::baseline();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_entanglement(p).log_neg);
  }
}
BENCHMARK(BM_compute_entanglement);

void BM_sweep_2d(benchmark::State& state) {
  const PhysicalParams p = PhysicalParams::baseline();
  const std::vector<AxisSpec> axes = {
      {SweepParameter::delta_c, -2.0, 2.0, static_cast<int>(state.range(0))},
      {SweepParameter::delta_2, -2.0, 2.0, static_cast<int>(state.range(0))},
  };
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(p, axes, threads).max_value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_sweep_2d)->Args({21, 1})->Args({21, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
