// Serial reference kernels against their OpenMP versions.
// Run with --benchmark_filter=Gram etc.; OMP_NUM_THREADS sets the parallel width.

#include <benchmark/benchmark.h>

#include "natlearn/concepts.hpp"
#include "natlearn/games.hpp"
#include "natlearn/norm.hpp"
#include "natlearn/pair_norm.hpp"

using namespace natlearn;

namespace {

TruthTable table_for(int n) {
  Rng rng = make_rng(1, "bench.table", static_cast<std::uint64_t>(n));
  return TruthTable::random(n, rng);
}

void BM_GramSerial(benchmark::State& state) {
  const auto t = table_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::gram_raw_sum(t));
}
void BM_GramParallel(benchmark::State& state) {
  const auto t = table_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parallel::gram_raw_sum(t));
}
BENCHMARK(BM_GramSerial)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

void BM_NaiveSerial(benchmark::State& state) {
  const auto t = table_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::naive_raw_sum(t));
}
BENCHMARK(BM_NaiveSerial)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto f = pair_function(table_for(12));
  for (auto _ : state) benchmark::DoNotOptimize(serial::mc_product_sum(f, static_cast<std::uint64_t>(state.range(0)), 7));
}
void BM_MonteCarloParallel(benchmark::State& state) {
  const auto f = pair_function(table_for(12));
  for (auto _ : state) benchmark::DoNotOptimize(parallel::mc_product_sum(f, static_cast<std::uint64_t>(state.range(0)), 7));
}
BENCHMARK(BM_MonteCarloSerial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

WeightedSignTable xor_maj_table() {
  const int n = 8;
  return tabulate(*xm_rule(n), xm_key_distribution(n), ExampleDistribution::uniform(n));
}

void BM_PairNormSerial(benchmark::State& state) {
  const auto table = xor_maj_table();
  for (auto _ : state) benchmark::DoNotOptimize(serial::pair_norm(table));
}
void BM_PairNormParallel(benchmark::State& state) {
  const auto table = xor_maj_table();
  for (auto _ : state) benchmark::DoNotOptimize(parallel::pair_norm(table));
}
BENCHMARK(BM_PairNormSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairNormParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
