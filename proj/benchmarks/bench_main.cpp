#include <complex>

#include <benchmark/benchmark.h>

#include "ctrw/jump_law.hpp"
#include "ctrw/laplace.hpp"
#include "ctrw/process.hpp"
#include "ctrw/random.hpp"
#include "ctrw/simulate.hpp"
#include "ctrw/spectral.hpp"

namespace {

void BM_PhiloxDraws(benchmark::State& state) {
  ctrw::PhiloxStream rng(42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxDraws);

void BM_SampleJump(benchmark::State& state) {
  const ctrw::JumpLaw law(0.8, 16.0, 1.0);
  ctrw::PhiloxStream rng(42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(law.sample(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleJump);

void BM_Ensemble(benchmark::State& state) {
  ctrw::SimConfig cfg;
  cfg.n_paths = static_cast<std::size_t>(state.range(0));
  cfg.workers = static_cast<unsigned>(state.range(1));
  const ctrw::ProcessSpec spec = ctrw::presets::fig1();
  for (auto _ : state) benchmark::DoNotOptimize(ctrw::simulate_ensemble(spec, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Args({20000, 1})->Args({20000, 0})->Unit(benchmark::kMillisecond);

void BM_PropagatorAB(benchmark::State& state) {
  const ctrw::ProcessSpec spec = ctrw::presets::fig1();
  const std::complex<double> s(2.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctrw::fl_propagator(spec, 0.7, s, ctrw::Conditioning::Unconditional));
  }
}
BENCHMARK(BM_PropagatorAB);

void BM_TimeDomainCf(benchmark::State& state) {
  const ctrw::ProcessSpec spec = ctrw::presets::fig1();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctrw::time_domain_cf(spec, 0.5, 0.6, ctrw::Conditioning::Unconditional, {}));
  }
}
BENCHMARK(BM_TimeDomainCf)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
