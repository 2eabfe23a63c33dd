#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectra/bigint.hpp"
#include "spectra/cocycle.hpp"
#include "spectra/schedule.hpp"
#include "spectra/skeleton.hpp"

namespace spectra {

/// Joins blocks with connecting words of length `ell` (the bridge table when
/// ell equals the specification gap, least connecting words otherwise).
/// Throws InvalidArgument when ell < l# or a block is inadmissible.
Word concat_map_psi(const SymbolicSystem& sys, const std::vector<Word>& blocks, std::size_t ell);

/// Recomputes T_k and t_k from N_k, n_k, ell_k and m_k.
void finalize_times(Schedule& s);

/// Copy of `s` with the bridge after `level` replaced by `m` symbols; times are
/// recomputed and no condition is re-checked.
Schedule with_bridge(const Schedule& s, std::size_t level, std::size_t m);

/// Level-k skeletons: length n_k, target chi_k, window eps_E_k, K0 of the
/// schedule, success judged against h_k - eps_k.
std::vector<Skeleton> schedule_skeletons(const CenterCocycle& c, const Schedule& s,
                                         std::size_t state_budget = kDefaultStateBudget);

/// A piece of the level layout of family words.
struct Segment {
  enum class Kind { kBlock, kGap, kBridge };
  Kind kind = Kind::kBlock;
  std::size_t level = 0;
  std::uint64_t index = 0;  // block index within the level
  std::uint64_t start = 0;
  std::uint64_t length = 0;
};

const char* to_string(Segment::Kind kind);

struct TowerOptions {
  /// Largest family enumerated member by member.
  std::uint64_t budget = 1'000'000;
  /// Members retained when card E_K exceeds the budget.
  std::size_t sample_size = 128;
  std::uint64_t seed = 1;
  bool allow_subsample = true;
};

/// Nested families E_1, ..., E_K. E_1 is the concatenation of N_1 level-1
/// blocks; E_{k+1} extends each member of E_k by a bridge of m_k symbols and
/// N_{k+1} level-(k+1) blocks. Members are regenerated on demand from their
/// index (explicit mode) or from a per-member seed (sampled mode).
class FamilyTower {
 public:
  FamilyTower(const CenterCocycle& c, Schedule schedule, std::vector<Skeleton> skeletons,
              const TowerOptions& options = {});

  std::size_t depth() const noexcept { return schedule_.depth(); }
  const Schedule& schedule() const noexcept { return schedule_; }
  const Skeleton& skeleton(std::size_t k) const { return skeletons_.at(k - 1); }
  const SymbolicSystem& system() const noexcept { return system_; }
  /// card S_k^{N_k}.
  const BigInt& card_D(std::size_t k) const { return card_D_.at(k - 1); }
  const BigInt& card_E(std::size_t k) const { return card_E_.at(k - 1); }
  /// t_{k-1} + T_k.
  std::uint64_t word_length(std::size_t k) const { return schedule_.word_length(k); }

  /// True when every member of E_K is enumerated.
  bool is_explicit() const noexcept { return explicit_; }
  std::uint64_t seed() const noexcept { return options_.seed; }
  /// Members available: card E_K when explicit, the sample size otherwise.
  std::size_t member_count() const noexcept { return member_count_; }
  /// The i-th retained member of E_K (full length t_{K-1} + T_K).
  Word member(std::size_t i) const;

  /// Layout of positions [0, word_length(K)).
  const std::vector<Segment>& layout() const noexcept { return layout_; }
  /// Segment containing position `pos`.
  const Segment& segment_at(std::uint64_t pos) const;

  /// Splits a word of length >= word_length(k) into its blocks of levels
  /// 1..k, checking that each block is a skeleton member and that every gap
  /// and bridge is the one the construction puts there. nullopt otherwise.
  std::optional<std::vector<Word>> decode(const Word& w, std::size_t k) const;

 private:
  Word assemble(const std::vector<std::vector<Word>>& blocks) const;
  Word gap_after(std::size_t k, const Word& block, const Word* next_block) const;

  SymbolicSystem system_;
  Schedule schedule_;
  std::vector<Skeleton> skeletons_;
  TowerOptions options_;
  std::vector<BigInt> card_D_, card_E_;
  std::vector<std::vector<Word>> listed_;  // explicit mode: skeleton members per level
  std::vector<Segment> layout_;
  bool explicit_ = false;
  std::size_t member_count_ = 0;
};

FamilyTower build_tower(const CenterCocycle& c, const Schedule& schedule, std::vector<Skeleton> skeletons,
                        const TowerOptions& options = {});

struct TowerCheck {
  bool cardinality_ok = false;
  bool nesting_ok = false;
  bool separation_ok = false;
  std::size_t members_checked = 0;
  std::string detail;

  bool ok() const { return cardinality_ok && nesting_ok && separation_ok; }
};

/// Cardinality identity at every level, prefix nesting (each retained
/// member decodes at every level; in explicit mode each E_k prefix has
/// exactly card E_K / card E_k extensions) and separation (distinct block
/// choices give distinct prefixes).
TowerCheck verify_tower(const FamilyTower& tower);

/// First `count` retained members cut to `length` (default: full length).
/// Member 0 uses the least skeleton word in every block.
std::vector<Word> limsup_points(const FamilyTower& tower, std::size_t count, std::optional<std::uint64_t> length = {});

}  // namespace spectra
