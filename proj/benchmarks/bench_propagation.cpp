#include <benchmark/benchmark.h>

#include "sqz/ensemble.hpp"
#include "sqz/nlse_engine.hpp"

namespace {

using namespace sqz;

void BM_SplitStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto grid = make_grid(n, 25.0);
  Propagator propagator(grid, PhysicsParams::ideal(1e8, 0.004));
  const auto input = sech_pulse(1.5, grid);
  FieldState field{input.samples, {}};
  for (auto _ : state) {
    propagator.linear_step(field, 0.004, Representation::classical);
    propagator.nonlinear_step(field, 0.004, Representation::classical);
    benchmark::DoNotOptimize(field.phi.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SplitStep)->RangeMultiplier(2)->Range(256, 4096);

void BM_RamanStep(benchmark::State& state) {
  auto grid = make_grid(512, 25.0);
  Propagator propagator(grid, PhysicsParams::with_raman(1e9, 0.1e-12, 300.0, 0.1, 0.004));
  const auto input = sech_pulse(1.5, grid);
  FieldState field{input.samples, {}};
  Rng rng(1);
  for (auto _ : state) {
    propagator.linear_step(field, 0.004, Representation::wigner, &rng);
    propagator.nonlinear_step(field, 0.004, Representation::wigner, &rng);
    benchmark::DoNotOptimize(field.phi.data());
  }
}
BENCHMARK(BM_RamanStep);

void BM_PositivePStep(benchmark::State& state) {
  auto grid = make_grid(512, 25.0);
  Propagator propagator(grid, PhysicsParams::ideal(1e8, 0.004));
  const auto input = sech_pulse(1.5, grid);
  Rng rng(2);
  FieldState field = sample_initial(input, Representation::positive_p, 1e8, rng);
  for (auto _ : state) {
    propagator.linear_step(field, 0.004, Representation::positive_p);
    propagator.nonlinear_step(field, 0.004, Representation::positive_p, &rng);
    benchmark::DoNotOptimize(field.phi.data());
  }
}
BENCHMARK(BM_PositivePStep);

// One Wigner trajectory of the headline configuration (90:10 loop, N = 1.5, zeta = 3).
void BM_HeadlineTrajectory(benchmark::State& state) {
  const Experiment e{make_grid(512, 25.0), TopologySpec::sagnac(0.9, 3.0, PhysicsParams::ideal(1e8, 0.004)),
                     Representation::wigner, 1.5, {}};
  Interferometer interferometer(e.grid, e.topology);
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trajectory(interferometer, e, 1, index++));
}
BENCHMARK(BM_HeadlineTrajectory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
