#include <benchmark/benchmark.h>

#include "flatband/extremal_loops.hpp"
#include "flatband/flatband_detector.hpp"

namespace {

using namespace flatband;

ValidatedGraph lieb() {
  PeriodicGraphSpec s;
  s.rank = 2;
  s.size = 3;
  s.edges = {{0, 1, {0, 0}, 1}, {0, 1, {-1, 0}, 1}, {0, 2, {0, 0}, 1}, {0, 2, {0, -1}, 1},
             {1, 0, {0, 0}, 1}, {1, 0, {1, 0}, 1},  {2, 0, {0, 0}, 1}, {2, 0, {0, 1}, 1}};
  s.potential.values = {0, 1, -1};
  return validate_spec(s);
}

// Ring of n cells with nearest and next-nearest hoppings.
ValidatedGraph ring(std::size_t n) {
  PeriodicGraphSpec s;
  s.rank = 1;
  s.size = n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const LatticeVector shift{j == 0 ? 1 : 0};
    s.edges.push_back({i, j, shift, 1});
    s.edges.push_back({j, i, -shift, 1});
    s.potential.values.push_back(GaussRational(static_cast<long>(i)));
  }
  return validate_spec(s);
}

void BM_CharSplit(benchmark::State& state) {
  const auto fiber = build_fiber(ring(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(char_split(fiber));
}
BENCHMARK(BM_CharSplit)->Arg(3)->Arg(5)->Arg(7);

void BM_ExactDetector(benchmark::State& state) {
  const auto fiber = build_fiber(lieb());
  for (auto _ : state) benchmark::DoNotOptimize(flat_band_energies(fiber));
}
BENCHMARK(BM_ExactDetector);

void BM_ConfigEnumeration(benchmark::State& state) {
  const auto g = lieb();
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(resummed_table(g, 0, order));
}
BENCHMARK(BM_ConfigEnumeration)->DenseRange(2, 8, 2);

void BM_Certificate(benchmark::State& state) {
  const auto g = ring(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_obstruction(g, 0));
}
BENCHMARK(BM_Certificate)->Arg(2)->Arg(3)->Arg(4);

}  // namespace
BENCHMARK_MAIN();
