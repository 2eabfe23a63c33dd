#include <benchmark/benchmark.h>

#include "common.hpp"
#include "spectra/lattice_dp.hpp"
#include "spectra/skeleton.hpp"

using namespace spectra;

static void BM_LatticeCount(benchmark::State& state) {
  const auto c = bench::reference();
  LatticeConstraint lc;
  lc.length = static_cast<std::size_t>(state.range(0));
  lc.prefix_ok = [](std::size_t l, double s) { return std::abs(s) <= 1.4 + 0.1 * static_cast<double>(l); };
  for (auto _ : state) benchmark::DoNotOptimize(count_lattice_words(c, lc));
}
BENCHMARK(BM_LatticeCount)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ExtractSkeleton(benchmark::State& state) {
  const auto c = bench::reference();
  SkeletonParams p;
  p.eps_E = 0.1;
  p.m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract_preskeleton(c, p).certified_rate);
}
BENCHMARK(BM_ExtractSkeleton)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_EnumerationCount(benchmark::State& state) {
  const auto c = bench::reference();
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(window_count_by_enumeration(c, 0.0, 0.1, default_K0(c), m));
}
BENCHMARK(BM_EnumerationCount)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
