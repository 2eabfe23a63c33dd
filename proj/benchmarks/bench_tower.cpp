#include <benchmark/benchmark.h>

#include "common.hpp"
#include "spectra/distribution.hpp"
#include "spectra/entropy.hpp"
#include "spectra/envelope.hpp"
#include "spectra/legendre.hpp"
#include "spectra/schedule.hpp"
#include "spectra/tower.hpp"

using namespace spectra;

namespace {

struct Fixture {
  CenterCocycle c = bench::reference();
  SpectrumCurve curve;
  Schedule schedule;
  std::vector<Skeleton> skeletons;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    const auto p = pressure_curve(x.c, linear_grid(-20.0, 20.0, 401));
    x.curve = spectrum(p, domain_grid(p, 101));
    x.schedule = build_schedule(x.c, {0.4, 0.2, 0.1, 0.05}, x.curve);
    x.skeletons = schedule_skeletons(x.c, x.schedule);
    return x;
  }();
  return f;
}

}  // namespace

static void BM_Schedule(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(build_schedule(f.c, {0.4, 0.2, 0.1, 0.05}, f.curve).depth());
}
BENCHMARK(BM_Schedule)->Unit(benchmark::kMillisecond);

static void BM_BuildTower(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    FamilyTower t(f.c, f.schedule, f.skeletons);
    benchmark::DoNotOptimize(t.member_count());
  }
}
BENCHMARK(BM_BuildTower)->Unit(benchmark::kMillisecond);

static void BM_TowerMember(benchmark::State& state) {
  const auto& f = fixture();
  const FamilyTower t(f.c, f.schedule, f.skeletons);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(t.member(i++ % t.member_count()).size());
}
BENCHMARK(BM_TowerMember)->Unit(benchmark::kMillisecond);

static void BM_Envelope(benchmark::State& state) {
  const auto& f = fixture();
  const FamilyTower t(f.c, f.schedule, f.skeletons);
  for (auto _ : state)
    benchmark::DoNotOptimize(exponent_envelope_check(t, f.c, static_cast<std::size_t>(state.range(0))).max_ratio);
}
BENCHMARK(BM_Envelope)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Audit(benchmark::State& state) {
  const auto& f = fixture();
  const FamilyTower t(f.c, f.schedule, f.skeletons);
  for (auto _ : state) benchmark::DoNotOptimize(local_entropy_audit(t, 0.05).pass);
}
BENCHMARK(BM_Audit)->Unit(benchmark::kMillisecond);

static void BM_EntropyShift(benchmark::State& state) {
  const ShiftCounter counter(SymbolicSystem::with_forbidden(2, {Word::parse("11")}));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_entropy(counter, NRange{20, 60}, Resolution{0}).rate);
}
BENCHMARK(BM_EntropyShift);
