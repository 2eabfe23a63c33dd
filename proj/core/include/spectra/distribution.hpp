#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectra/bigint.hpp"
#include "spectra/entropy.hpp"
#include "spectra/word.hpp"

namespace spectra {

class FamilyTower;

/// Uniform probability on a finite set of distinct words (one family E_k).
/// The mass of a cylinder is the fraction of members extending it.
class CylinderMeasure {
 public:
  CylinderMeasure() = default;
  /// Duplicates collapse. An empty support is allowed but has no masses.
  explicit CylinderMeasure(std::vector<Word> support, std::size_t level = 0);

  /// Level-k family of an explicit tower: the distinct t_{k-1} + T_k
  /// prefixes of its members. Throws InvalidArgument on a sampled tower.
  static CylinderMeasure from_tower(const FamilyTower& tower, std::size_t k);

  std::size_t level() const noexcept { return level_; }
  std::size_t size() const noexcept { return support_.size(); }
  bool empty() const noexcept { return support_.empty(); }
  const std::vector<Word>& support() const noexcept { return support_; }
  /// Length of the shortest member.
  std::size_t length() const noexcept { return length_; }

  /// Exact mass of the cylinder of the given prefix.
  BigRational mass(std::span<const Symbol> prefix) const;
  /// Largest mass among cylinders of the given depth, as a member count.
  std::size_t max_cylinder_count(std::size_t depth) const;

 private:
  std::vector<Word> support_;  // sorted
  std::size_t level_ = 0;
  std::size_t length_ = 0;
};

/// Mass of the Bowen ball B_n(w, 2^-j), the cylinder of depth n + j around w.
/// Throws InvalidArgument when n + j exceeds the stored word length (or w),
/// EmptyDomain on an empty support.
BigRational ball_mass(const CylinderMeasure& m, const Word& w, std::size_t n, Resolution res);

/// Uniform measure on the top family E_K of a tower, evaluated from the
/// skeleton automata. Cylinders of depth at most t_{k-1} + T_k carry the same
/// mass under the level-k measure, so one object answers every level.
class TowerMeasure {
 public:
  explicit TowerMeasure(const FamilyTower& tower);

  const FamilyTower& tower() const noexcept { return *tower_; }
  std::uint64_t length() const noexcept { return length_; }

  /// Exact mass of the cylinder of w[0, depth).
  BigRational mass(const Word& w, std::uint64_t depth) const;
  /// Upper bound on log of the largest cylinder mass at `depth`, rounded
  /// outward. Exact (up to that rounding) away from gaps and bridges; inside
  /// them the mass at the start of the segment is used.
  double log_max_mass(std::uint64_t depth) const;

 private:
  const FamilyTower* tower_;
  std::uint64_t length_ = 0;
  std::vector<double> log_card_E_;
  std::vector<double> log_card_S_;
  std::vector<std::vector<double>> log_max_completions_;
};

struct AuditReport {
  bool pass = false;
  /// True when theta >= h_target and nothing was checked.
  bool vacuous = false;
  double h_target = 0.0;
  double theta = 0.0;
  NRange range;
  Resolution res;
  /// Smallest n from which every n in the range passes.
  std::optional<std::size_t> n0;
  /// min over n of -log(max mass)/n - (h_target - theta).
  double worst_margin = 0.0;
  std::size_t worst_n = 0;
  /// The same minimum restricted to n >= n0.
  double tail_margin = 0.0;
  std::size_t failures = 0;
  std::string detail;
};

/// Checks mass <= exp(-n (h_target - theta)) for every cylinder of depth
/// n + j meeting the support and every n in the range. Passes when the
/// passing tail [n0, last] covers at least half of the range.
AuditReport local_entropy_audit(const TowerMeasure& m, double theta, NRange range, Resolution res,
                                double h_target);
AuditReport local_entropy_audit(const CylinderMeasure& m, double theta, NRange range, Resolution res,
                                double h_target);
/// Tower overload with h_target defaulting to the schedule's limit entropy
/// and the range defaulting to every n the words support.
AuditReport local_entropy_audit(const FamilyTower& tower, double theta, std::optional<NRange> range = {},
                                Resolution res = {}, std::optional<double> h_target = {});

struct EdpCertificate {
  bool certified = false;
  /// h_target - theta when certified.
  std::optional<double> lower_bound;
  AuditReport audit;
  /// Separated-count regression on the support over the passing tail (the
  /// full range when the audit fails).
  EntropyEstimate direct;
  /// lower_bound <= direct.rate + 2 * direct.residual.
  bool consistent = false;
  std::string statement;
};

/// Entropy distribution lower bound. Throws EmptyDomain on an empty support.
EdpCertificate edp_certificate(const CylinderMeasure& m, double theta, NRange range, Resolution res,
                               double h_target);
EdpCertificate edp_certificate(const FamilyTower& tower, double theta, std::optional<NRange> range = {},
                               Resolution res = {}, std::optional<double> h_target = {});

}  // namespace spectra
