#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spectra/word.hpp"

namespace spectra {

/// One-step subshift of finite type over {0, ..., k-1} together with its
/// specification data: a bridge length l# and, for every ordered pair of
/// symbols (a, b), a word w of length l# such that a.w.b is admissible.
///
/// Only primitive transition matrices are accepted, so bridges of every
/// length >= l# exist. Instances are immutable.
class SymbolicSystem {
 public:
  using Matrix = std::vector<std::vector<bool>>;

  /// Validates primitivity and derives the bridge table by lexicographically
  /// least path search with the minimal bridge length.
  explicit SymbolicSystem(Matrix transitions);

  /// Same, with an explicit bridge table indexed [a][b]. Every entry must have
  /// the same length and connect a to b.
  SymbolicSystem(Matrix transitions, std::vector<std::vector<Word>> bridges);

  static SymbolicSystem full_shift(int alphabet_size);
  /// Forbidden words must have length 2 (one-step SFT).
  static SymbolicSystem with_forbidden(int alphabet_size,
                                       const std::vector<Word>& forbidden);

  int alphabet_size() const noexcept { return k_; }
  const Matrix& transitions() const noexcept { return transitions_; }
  bool allowed(Symbol a, Symbol b) const { return transitions_[a][b]; }
  bool is_full_shift() const noexcept { return full_shift_; }

  /// l#, the specification gap.
  std::size_t bridge_length() const noexcept { return bridge_length_; }
  const Word& bridge(Symbol a, Symbol b) const { return bridges_[a][b]; }

  /// Smallest p with every entry of A^p positive.
  std::size_t primitivity_exponent() const noexcept { return primitivity_exponent_; }

  /// Index of the first i with (w_i, w_{i+1}) forbidden, if any. Symbols out of
  /// range are reported at their own index.
  std::optional<std::size_t> first_violation(const Word& w) const;
  bool admissible(const Word& w) const { return !first_violation(w).has_value(); }
  /// Throws InadmissibleWord naming the first violating index.
  void require_admissible(const Word& w) const;

  /// True iff some admissible word a.x_1...x_{steps-1}.b exists, i.e. the
  /// (a, b) entry of A^steps is positive.
  bool reachable(Symbol a, Symbol b, std::size_t steps) const;

  /// Lexicographically least w of the given length with a.w.b admissible.
  /// Throws InvalidArgument when no such word exists.
  Word connect(Symbol a, Symbol b, std::size_t length) const;

  /// Lexicographically least admissible continuation of the given length
  /// following a.
  Word continuation(Symbol a, std::size_t length) const;

  /// The time-reversed system (transposed transitions).
  SymbolicSystem reversed() const;

  std::string describe() const;

 private:
  void validate_and_index();

  int k_ = 0;
  Matrix transitions_;
  bool full_shift_ = false;
  std::size_t primitivity_exponent_ = 1;
  std::size_t bridge_length_ = 0;
  // reach_[p][a][b]: entry (a, b) of A^p is positive, for p < primitivity exponent.
  std::vector<Matrix> reach_;
  std::vector<std::vector<Word>> bridges_;
};

}  // namespace spectra
