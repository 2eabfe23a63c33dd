#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spectra/cocycle.hpp"
#include "spectra/schedule.hpp"
#include "spectra/tower.hpp"

namespace spectra {

/// Envelope outcome for one k0.
struct EnvelopeLevel {
  std::size_t k0 = 0;
  /// |chi_{k0}| + 6 eps_{k0}.
  double bound = 0.0;
  /// max over samples and n in (t_{k0+1}, t_K] of |S_n / n| / bound.
  double max_ratio = 0.0;
  std::size_t worst_sample = 0;
  std::uint64_t worst_n = 0;
  /// Number of n values examined (0 when the range is empty).
  std::uint64_t positions = 0;
};

struct EnvelopeReport {
  bool pass = true;
  double max_ratio = 0.0;
  std::size_t samples = 0;
  std::vector<EnvelopeLevel> levels;
  /// For a failure: the segment of the worst sample, before the worst n,
  /// whose sum strays furthest from its level's target.
  std::optional<Segment> culprit;
  std::string detail;
};

/// Checks |S_n / n| <= |chi_{k0}| + 6 eps_{k0} for every k0 < K and every n
/// in (t_{k0+1}, min(t_K, |w|)] on each word.
EnvelopeReport exponent_envelope_check(const FamilyTower& tower, const CenterCocycle& c,
                                       const std::vector<Word>& sample);

/// Same over the first `count` retained members, generated one at a time.
EnvelopeReport exponent_envelope_check(const FamilyTower& tower, const CenterCocycle& c, std::size_t count);

/// Cocycle of the time-reversed model: the reversed system with
/// phi_rev(w) = phi(reverse(w)).
CenterCocycle reversed_cocycle(const CenterCocycle& c);

struct BackwardExtension {
  /// x_{-1}, x_{-2}, ... (backward time order), bridge included.
  Word backward;
  /// The two-sided word read left to right; the forward part starts at `origin`.
  Word two_sided;
  std::size_t origin = 0;
  EnvelopeReport report;
};

/// Builds a positive-exponent tower of the reversed model from `sched_back`
/// and prepends (the reverse of) its member `member` to `forward_word`,
/// joined by a bridge. The backward averages are checked with the mirrored
/// envelope.
BackwardExtension extend_backward(const CenterCocycle& c, const Word& forward_word, const Schedule& sched_back,
                                  const TowerOptions& options = {}, std::size_t member = 0);

/// Schedule for the backward half: the positive side of the reversed model.
Schedule backward_schedule(const CenterCocycle& c, const std::vector<double>& eps, const SpectrumCurve& spectrum,
                           ScheduleOptions options = {});

}  // namespace spectra
