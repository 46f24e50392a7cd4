#include <benchmark/benchmark.h>

#include "subfbm/covariance.hpp"
#include "subfbm/mc_harness.hpp"
#include "subfbm/qv_stats.hpp"
#include "subfbm/rho_kernel.hpp"

namespace {

using namespace subfbm;

const HurstParameter kH(0.65);

void BM_RhoTable(benchmark::State& state) {
  const RhoKernel kernel(kH);
  for (auto _ : state) benchmark::DoNotOptimize(kernel.table(static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RhoTable)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

void BM_BuildScaledCov(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_scaled_cov(kH, state.range(0)));
}
BENCHMARK(BM_BuildScaledCov)->RangeMultiplier(4)->Range(64, 2048)->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
  const auto c = build_scaled_cov(kH, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(factorize(c));
}
BENCHMARK(BM_Factorize)->RangeMultiplier(4)->Range(64, 2048)->Unit(benchmark::kMillisecond);

void BM_VarZnExact(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(var_zn_exact(kH, state.range(0)));
}
BENCHMARK(BM_VarZnExact)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)->Unit(benchmark::kMillisecond);

void BM_SteinBound(benchmark::State& state) {
  const auto c = build_scaled_cov(kH, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stein_bound(c, 1));
}
BENCHMARK(BM_SteinBound)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_RunBatch(benchmark::State& state) {
  const auto c = factorize(build_scaled_cov(kH, state.range(0)));
  constexpr std::size_t kReps = 2'000;
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(c, kReps, 1, 1));
  state.SetItemsProcessed(state.iterations() * kReps);
}
BENCHMARK(BM_RunBatch)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
