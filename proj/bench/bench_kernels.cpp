// Serial reference kernels against their OpenMP versions.

#include "ogt/embed.hpp"
#include "ogt/tester.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ogt;

ColorAlphabet ab() { return ColorAlphabet({"a", "b"}); }

OrderedGraph random_graph(int n, std::uint64_t seed) {
  Rng rng(seed);
  return gen_uniform(ab(), n, rng);
}

OrderedGraph pattern(int n, std::uint64_t seed) { return random_graph(n, seed); }

void BM_count_serial(benchmark::State& state) {
  const OrderedGraph g = random_graph(static_cast<int>(state.range(0)), 1);
  const OrderedGraph f = pattern(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(count_induced_ordered(g, f));
}

void BM_count_parallel(benchmark::State& state) {
  const OrderedGraph g = random_graph(static_cast<int>(state.range(0)), 1);
  const OrderedGraph f = pattern(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(count_induced_ordered_parallel(g, f));
}

ForbiddenFamily sampling_family() { return {ab(), {pattern(4, 3), pattern(3, 4)}}; }

void BM_sample_serial(benchmark::State& state) {
  const OrderedGraph g = random_graph(200, 5);
  const ForbiddenFamily fam = sampling_family();
  for (auto _ : state) benchmark::DoNotOptimize(sample_test(g, fam, 8, static_cast<int>(state.range(0)), 7));
}

void BM_sample_parallel(benchmark::State& state) {
  const OrderedGraph g = random_graph(200, 5);
  const ForbiddenFamily fam = sampling_family();
  for (auto _ : state) benchmark::DoNotOptimize(sample_test_parallel(g, fam, 8, static_cast<int>(state.range(0)), 7));
}

// A 2-vertex member keeps d_star below the largest size, so no early exit.
ForbiddenFamily dstar_family() {
  OrderedGraph edge(ab(), 2, 1);
  return {ab(), {edge, pattern(3, 9)}};
}

void BM_dstar_serial(benchmark::State& state) {
  const ForbiddenFamily fam = dstar_family();
  for (auto _ : state) benchmark::DoNotOptimize(d_star(fam, 2, 2));
}

void BM_dstar_parallel(benchmark::State& state) {
  const ForbiddenFamily fam = dstar_family();
  for (auto _ : state) benchmark::DoNotOptimize(d_star_parallel(fam, 2, 2));
}

}  // namespace

BENCHMARK(BM_count_serial)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_count_parallel)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dstar_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dstar_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
