#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "spectra/bigint.hpp"
#include "spectra/symbolic_system.hpp"
#include "spectra/word.hpp"

namespace spectra {

class FamilyTower;

/// Inclusive range of n values.
struct NRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
};

/// Parses "a:b" (inclusive). Throws InvalidArgument.
NRange parse_n_range(std::string_view text);

/// Number of distinct prefixes of each depth of some set of sequences.
class PrefixCounter {
 public:
  virtual ~PrefixCounter() = default;
  /// Deepest prefix length the source can answer.
  virtual std::uint64_t max_depth() const = 0;
  /// log of the number of distinct prefixes of length `depth`; -inf when the
  /// set is empty.
  virtual double log_count(std::uint64_t depth) const = 0;
};

/// Explicit finite set of words. Counts are exact.
class WordSetCounter : public PrefixCounter {
 public:
  explicit WordSetCounter(std::vector<Word> words);

  std::uint64_t max_depth() const override { return max_depth_; }
  double log_count(std::uint64_t depth) const override;
  std::size_t count(std::uint64_t depth) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<Word>& words() const noexcept { return words_; }

 private:
  std::vector<Word> words_;        // sorted, distinct
  std::vector<std::size_t> count_; // count_[d], d <= max_depth_
  std::uint64_t max_depth_ = 0;
};

/// All admissible words of a full shift or an SFT.
class ShiftCounter : public PrefixCounter {
 public:
  explicit ShiftCounter(SymbolicSystem system);

  std::uint64_t max_depth() const override { return std::numeric_limits<std::uint64_t>::max(); }
  double log_count(std::uint64_t depth) const override;
  BigInt count(std::uint64_t depth) const;

 private:
  SymbolicSystem system_;
};

/// Support of a family tower, counted from the skeleton automata without
/// listing members. Inside a gap or bridge the count at the start of that
/// segment is reported (a lower bound; exact on systems without gaps).
class TowerCounter : public PrefixCounter {
 public:
  explicit TowerCounter(const FamilyTower& tower);

  std::uint64_t max_depth() const override { return length_; }
  double log_count(std::uint64_t depth) const override;

 private:
  const FamilyTower* tower_;
  std::uint64_t length_ = 0;
  std::vector<double> log_card_E_;                 // index k, log card E_0 = 0
  std::vector<double> log_card_S_;                 // index k-1
  std::vector<std::vector<double>> log_distinct_;  // per level, per offset
};

enum class EntropyMethod { kSeparated, kSpanning, kCoverCost };

const char* to_string(EntropyMethod m);
std::optional<EntropyMethod> parse_entropy_method(std::string_view text);

struct EntropyEstimate {
  double rate = 0.0;
  NRange range;
  Resolution res;
  EntropyMethod method = EntropyMethod::kSeparated;
  /// RMS residual of the least-squares line through log count against n.
  double residual = 0.0;
};

/// log of the count behind each method at a given n:
///   separated  distinct (n + j)-prefixes (maximal separated set),
///   spanning   distinct (n + j - 1)-prefixes (minimal spanning set with
///              closed balls),
///   cover_cost the separated count (fixed-length covers).
double log_method_count(const PrefixCounter& counts, std::size_t n, Resolution res, EntropyMethod method);

/// log of the fixed-length cover cost sum over a minimal cover by
/// depth-(n + j) cylinders of e^{-n h}.
double log_cover_cost(const PrefixCounter& counts, std::size_t n, Resolution res, double h);

/// Separated and spanning: least-squares slope of log count against n.
/// Cover cost: the least h for which the cover cost never exceeds its value at
/// the start of the range.
/// Throws InvalidArgument when the range has fewer than two points or reaches
/// past the stored depth, EmptyDomain on an empty set.
EntropyEstimate estimate_entropy(const PrefixCounter& counts, NRange range, Resolution res,
                                 EntropyMethod method = EntropyMethod::kSeparated);
EntropyEstimate estimate_entropy(const std::vector<Word>& words, NRange range, Resolution res,
                                 EntropyMethod method = EntropyMethod::kSeparated);

struct CapacitiveEntropies {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t window = 0;
  double gap() const { return upper - lower; }
};

/// Least and greatest separated-count slopes over sliding windows of
/// consecutive n (default width: a quarter of the range, at least 2). Long
/// ranges are probed at 513 evenly spread window positions.
CapacitiveEntropies capacitive_entropies(const PrefixCounter& counts, NRange range, Resolution res,
                                         std::size_t window = 0);
CapacitiveEntropies capacitive_entropies(const std::vector<Word>& words, NRange range, Resolution res,
                                         std::size_t window = 0);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

/// Ordinary least squares; needs at least two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Reads one word per line; blank lines and lines starting with '#' are
/// skipped.
std::vector<Word> read_words(std::string_view text);

}  // namespace spectra
