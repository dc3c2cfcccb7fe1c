// Serial reference drivers against their OpenMP counterparts.
//
//   ./bench_simulation --benchmark_filter=Coverage

#include <benchmark/benchmark.h>

#include <vector>

#include "anytime/forecasters.hpp"
#include "anytime/rng.hpp"
#include "anytime/simulation.hpp"

namespace {

using namespace anytime;

std::vector<CsConfig> configs() {
  return {CsConfig{CsMethod::eb, UniformBoundary::stitched95(), Centering::mean},
          CsConfig{CsMethod::eb, UniformBoundary::gamma_exponential(2.0, 2.0, 0.025),
                   Centering::mean},
          CsConfig{CsMethod::hoeffding, UniformBoundary::normal_mixture(2.0, 0.025),
                   Centering::mean}};
}

PathSpec coverage_spec() {
  PathSpec spec;
  spec.p_name = "k29_poly3";
  spec.q_name = "laplace";
  spec.horizon = 2000;
  return spec;
}

void BM_CoverageSerial(benchmark::State& state) {
  const auto spec = coverage_spec();
  const auto cfg = configs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_coverage_serial(spec, cfg, static_cast<std::size_t>(state.range(0)), 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CoverageParallel(benchmark::State& state) {
  const auto spec = coverage_spec();
  const auto cfg = configs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_coverage_parallel(spec, cfg, static_cast<std::size_t>(state.range(0)), 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NullSerial(benchmark::State& state) {
  NullSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_null_serial(spec, static_cast<std::size_t>(state.range(0)), 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NullParallel(benchmark::State& state) {
  NullSpec spec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_null_parallel(spec, static_cast<std::size_t>(state.range(0)), 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<HistoryEntry> history(std::size_t n) {
  const rng::CounterRng gen(1, rng::experiment);
  std::vector<HistoryEntry> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {gen.uniform(2 * i), gen.uniform(2 * i + 1) < 0.5 ? 1 : 0};
  }
  return out;
}

void BM_ResidualSerial(benchmark::State& state) {
  const auto hist = history(static_cast<std::size_t>(state.range(0)));
  const auto kernel = Kernel::rbf(0.01);
  for (auto _ : state) benchmark::DoNotOptimize(k29_residual(hist, kernel, 0.4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ResidualParallel(benchmark::State& state) {
  const auto hist = history(static_cast<std::size_t>(state.range(0)));
  const auto kernel = Kernel::rbf(0.01);
  for (auto _ : state) benchmark::DoNotOptimize(k29_residual_parallel(hist, kernel, 0.4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_CoverageSerial)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CoverageParallel)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NullSerial)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NullParallel)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ResidualSerial)->Arg(1 << 14)->Arg(1 << 18)->UseRealTime();
BENCHMARK(BM_ResidualParallel)->Arg(1 << 14)->Arg(1 << 18)->UseRealTime();

BENCHMARK_MAIN();
