#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spectra/bigint.hpp"
#include "spectra/symbolic_system.hpp"
#include "spectra/word.hpp"

namespace spectra {

/// Default cap on k^n for exhaustive enumeration.
inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 26;

/// Lexicographic depth-first stream over the admissible words of a fixed
/// length. Each stream owns its cursor; streams over the same system are
/// independent.
class WordStream {
 public:
  /// Throws BudgetExceeded when k^n exceeds `budget`, InvalidArgument for n = 0.
  WordStream(const SymbolicSystem& system, std::size_t n,
             std::uint64_t budget = kDefaultEnumerationBudget);

  /// Writes the next word into `out`; false once exhausted.
  bool next(Word& out);

 private:
  bool advance_from(std::size_t position);

  const SymbolicSystem* system_;
  std::size_t n_;
  std::vector<Symbol> current_;
  bool started_ = false;
  bool done_ = false;
};

/// Materializes the stream; same preconditions.
std::vector<Word> enumerate_words(const SymbolicSystem& system, std::size_t n,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

/// Number of admissible words of length n (row sums of A^(n-1)), exact.
BigInt count_admissible(const SymbolicSystem& system, std::size_t n);

/// Size of a maximal (n, 2^-j)-separated subset: the number of distinct
/// (n + j)-prefixes. Throws InvalidArgument listing words that are too short.
std::size_t separated_count(const std::vector<Word>& words, std::size_t n, Resolution res);

/// One representative per (n + j)-prefix class, the lexicographically least;
/// output sorted.
std::vector<Word> thin_to_separated(std::vector<Word> words, std::size_t n, Resolution res);

}  // namespace spectra
