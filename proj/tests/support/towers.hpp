#pragma once

#include <memory>
#include <vector>

#include "spectra/schedule.hpp"
#include "spectra/tower.hpp"
#include "support/models.hpp"

namespace spectra::testing {

struct TowerFixture {
  CenterCocycle cocycle;
  SpectrumFixture spectrum;
  Schedule schedule;
  std::unique_ptr<FamilyTower> tower;
};

inline std::unique_ptr<TowerFixture> make_tower(const CenterCocycle& c, const std::vector<double>& eps,
                                                TowerOptions options = {}) {
  auto f = std::make_unique<TowerFixture>(TowerFixture{c, spectrum_of(c), {}, nullptr});
  f->schedule = build_schedule(c, eps, f->spectrum.curve);
  f->tower = std::make_unique<FamilyTower>(c, f->schedule, schedule_skeletons(c, f->schedule), options);
  return f;
}

/// Reference model, eps = (0.4, 0.2, 0.1, 0.05), budget 1e6, seed 1.
inline const TowerFixture& reference_tower() {
  static const auto f = make_tower(reference_model(), {0.4, 0.2, 0.1, 0.05});
  return *f;
}

/// Reference model with a single level (eps = 0.4); small enough to list.
inline const TowerFixture& small_tower() {
  static const auto f = make_tower(reference_model(), {0.4});
  return *f;
}

/// Golden-mean model, whose blocks are separated by gaps.
inline const TowerFixture& golden_tower(std::size_t levels) {
  static const auto one = make_tower(golden_model(), {0.4});
  static const auto two = make_tower(golden_model(), {0.4, 0.2});
  return levels == 1 ? *one : *two;
}

/// Two short golden-mean levels (n = 4, N = 3 and n = 5, N = 2) so the
/// explicit family has inner gaps and a bridge.
inline const TowerFixture& handmade_golden_tower() {
  static const auto f = [] {
    const auto& base = golden_tower(2);
    auto g = std::make_unique<TowerFixture>(TowerFixture{base.cocycle, base.spectrum, base.schedule, nullptr});
    g->schedule.levels[0].n = 4;
    g->schedule.levels[0].N = 3;
    g->schedule.levels[1].n = 5;
    g->schedule.levels[1].N = 2;
    finalize_times(g->schedule);
    g->tower = std::make_unique<FamilyTower>(g->cocycle, g->schedule, schedule_skeletons(g->cocycle, g->schedule));
    return g;
  }();
  return *f;
}

}  // namespace spectra::testing
