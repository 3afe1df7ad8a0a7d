// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <map>

#include "geodisc/kernels.hpp"
#include "geodisc/pointsets.hpp"
#include "geodisc/spectral.hpp"

using namespace geodisc;

namespace {

const WeightedPointSet& points(std::size_t n) {
  static std::map<std::size_t, WeightedPointSet> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, sample_uniform(Space(SpaceKind::complex(2)), n, 1)).first;
  return it->second;
}

void BM_GramSerial(benchmark::State& st) {
  const auto& ps = points(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(gram_spectrum_serial(ps, 200));
}

void BM_GramParallel(benchmark::State& st) {
  const auto& ps = points(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(gram_spectrum_parallel(ps, 200));
}

const TruncatedBallKernel& kernel() {
  static const BallCoefficientTable t(space_params(SpaceKind::complex(2)), 1.0, 400);
  static const TruncatedBallKernel K(1.0, 0.0, t.weights());
  return K;
}

void BM_PairSumSerial(benchmark::State& st) {
  const auto& ps = points(st.range(0));
  const auto& K = kernel();
  for (auto _ : st) benchmark::DoNotOptimize(pair_kernel_sum_serial(ps, K));
}

void BM_PairSumParallel(benchmark::State& st) {
  const auto& ps = points(st.range(0));
  const auto& K = kernel();
  for (auto _ : st) benchmark::DoNotOptimize(pair_kernel_sum_parallel(ps, K));
}

void BM_MonteCarloSerial(benchmark::State& st) {
  const auto& ps = points(64);
  const double v = ps.space().ball_volume(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(montecarlo_serial(ps, 1.0, v, st.range(0), 7));
}

void BM_MonteCarloParallel(benchmark::State& st) {
  const auto& ps = points(64);
  const double v = ps.space().ball_volume(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(montecarlo_parallel(ps, 1.0, v, st.range(0), 7));
}

}  // namespace

BENCHMARK(BM_GramSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairSumSerial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairSumParallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloSerial)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
