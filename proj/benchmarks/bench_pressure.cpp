#include <benchmark/benchmark.h>

#include "common.hpp"
#include "spectra/legendre.hpp"
#include "spectra/pressure.hpp"

using namespace spectra;

static void BM_PressurePoint(benchmark::State& state) {
  const PressureFunction p(bench::reference());
  const double q = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(p(q));
}
BENCHMARK(BM_PressurePoint)->Arg(-20)->Arg(0)->Arg(20);

// Nearly periodic weighting: exercises the rescaled fallback.
static void BM_PressureGoldenNegative(benchmark::State& state) {
  const PressureFunction p(bench::golden());
  for (auto _ : state) benchmark::DoNotOptimize(p(-20.0));
}
BENCHMARK(BM_PressureGoldenNegative);

static void BM_PressureCurve(benchmark::State& state) {
  const auto c = bench::reference();
  const auto grid = linear_grid(-20.0, 20.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pressure_curve(c, grid).values.back());
}
BENCHMARK(BM_PressureCurve)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

static void BM_Spectrum(benchmark::State& state) {
  const auto p = pressure_curve(bench::reference(), linear_grid(-20.0, 20.0, 401));
  const auto grid = domain_grid(p, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(p, grid).values.back());
}
BENCHMARK(BM_Spectrum)->Arg(101)->Unit(benchmark::kMillisecond);

static void BM_BruteForce(benchmark::State& state) {
  const auto c = bench::reference();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_brute_force(c, 0.0, 0.05, n));
}
BENCHMARK(BM_BruteForce)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
