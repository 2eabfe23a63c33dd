#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectra/cocycle.hpp"
#include "spectra/lattice_dp.hpp"
#include "spectra/legendre.hpp"
#include "spectra/pressure.hpp"

namespace spectra {

/// One level of the quantifier schedule.
struct ScheduleLevel {
  double eps = 0.0;
  /// Target exponent and its spectrum value h = H(chi).
  double chi = 0.0;
  double h = 0.0;
  /// Skeleton window half-width used for this level's blocks.
  double eps_E = 0.0;
  std::size_t n = 0;          // block length
  std::uint64_t N = 0;        // blocks per level
  std::size_t ell = 0;        // gap after each block
  std::size_t m = 0;          // bridge into the next level
  std::size_t ell_flat = 0;   // distortion time of the potential
  std::size_t ell_sharp = 0;  // specification gap
  std::size_t b_sharp = 0;    // skeleton rate clears h - eps at every length from here on (scanned)
  std::size_t T_sharp = 0;    // ceil(log K / eps)
  double log_K = 0.0;         // distortion constant (log)
  std::uint64_t T = 0;        // N (n + ell)
  std::uint64_t t = 0;        // t_{k-1} + T + m
};

struct Schedule {
  Restriction sign = Restriction::kNegative;
  /// One-sided limit of H at zero on the schedule's side.
  double h_frak = 0.0;
  double C_max = 0.0;
  double K0 = 1.0;
  std::vector<ScheduleLevel> levels;  // levels[k - 1] is level k

  std::size_t depth() const noexcept { return levels.size(); }
  const ScheduleLevel& level(std::size_t k) const { return levels.at(k - 1); }
  /// t_k with t_0 = 0.
  std::uint64_t t(std::size_t k) const { return k == 0 ? 0 : levels.at(k - 1).t; }
  /// Length of level-k family words: t_{k-1} + T_k.
  std::uint64_t word_length(std::size_t k) const { return t(k - 1) + level(k).T; }
};

struct ScheduleOptions {
  Restriction sign = Restriction::kNegative;
  /// Skeleton distortion constant; defaults to exp(d * max |phi|).
  std::optional<double> K0;
  /// eps_E at level k is this factor times eps_k.
  double window_factor = 1.0;
  /// Bridge length used in place of the specification gap (at least l#).
  std::optional<std::size_t> bridge_override;
  std::size_t max_block_length = std::size_t{1} << 16;
  std::uint64_t max_total_length = std::uint64_t{1} << 40;
  std::size_t state_budget = kDefaultStateBudget;
};

/// Greedy-minimal schedule. Quantities referring to level K + 1 are taken
/// equal to level K's; conditions linking two levels are imposed only
/// between existing levels. Throws InvalidArgument unless eps is positive and
/// strictly decreasing, InfeasibleSchedule naming the binding condition and
/// level when a search limit is hit.
Schedule build_schedule(const CenterCocycle& c, const std::vector<double>& eps, const SpectrumCurve& spectrum,
                        const ScheduleOptions& options = {});

/// One evaluated inequality.
struct InequalityCheck {
  std::string name;
  std::size_t level = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Re-evaluates all eight conditions on every level where they apply.
/// Integer-by-eps comparisons use exact rationals.
///   gap_dominance:       max(ell_flat, b_sharp, T_sharp) < n_k
///   bridge_cost:         m_k C_max / n_k < eps_k
///   block_fraction:      n_k / (n_k + ell_sharp + m_k) >= 1 - eps_k
///   next_distortion:     log K_{k+1} / n_k < eps_k
///   next_overhead:       (log K_{k+1} + (m_{k+1} + ell_flat_{k+1}) C_max) / n_k < eps_k
///   next_block_vs_time:  (n_{k+1} + ell_sharp) / t_k < eps_k
///   time_growth:         t_k / t_{k+1} < eps_{k+1} / C_max
///   level_distortion:    log K_k / (N_k (n_k + ell_k)) < eps_k
std::vector<InequalityCheck> check_schedule(const Schedule& s);

bool all_pass(const std::vector<InequalityCheck>& checks);

/// Names of the eight conditions in check order.
const std::vector<std::string>& schedule_condition_names();

}  // namespace spectra
