#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spectra/symbolic_system.hpp"
#include "spectra/word.hpp"

namespace spectra {

/// How a depth-d potential is summed over a finite word.
enum class BoundaryMode {
  /// Only the |w| - d + 1 windows that fit inside w.
  kTruncated,
  /// |w| windows, wrapping around to the start of w.
  kPeriodic,
};

/// Center log-derivative potential: a real value for every admissible word of
/// length d (natural-log units). Carries a copy of its base system.
class CenterCocycle {
 public:
  /// `values` lists the admissible d-words in lexicographic order.
  CenterCocycle(SymbolicSystem system, int depth, std::vector<double> values);

  /// Depth-1 potential given per symbol.
  static CenterCocycle locally_constant(SymbolicSystem system, std::vector<double> per_symbol);

  const SymbolicSystem& system() const noexcept { return system_; }
  int depth() const noexcept { return depth_; }
  int alphabet_size() const noexcept { return system_.alphabet_size(); }

  /// Value on an admissible window of exactly `depth()` symbols.
  double value(std::span<const Symbol> window) const;
  /// Value by base-k code of the window; NaN when inadmissible.
  double value_by_code(std::size_t code) const { return table_[code]; }
  std::size_t window_count() const noexcept { return table_.size(); }
  bool defined(std::size_t code) const;

  /// Admissible d-words in lexicographic order with their values.
  const std::vector<Word>& windows() const noexcept { return windows_; }
  const std::vector<double>& window_values() const noexcept { return values_; }

  double min_value() const noexcept { return min_; }
  double max_value() const noexcept { return max_; }
  double max_abs() const noexcept { return max_abs_; }
  /// max over (d-1)-cylinders of (max - min); zero for d = 1.
  double variation() const noexcept { return variation_; }
  /// 2 * max |phi|.
  double c_max() const noexcept { return 2.0 * max_abs_; }

  std::size_t encode(std::span<const Symbol> window) const;

 private:
  SymbolicSystem system_;
  int depth_;
  std::vector<double> table_;  // size k^d, NaN off the admissible set
  std::vector<Word> windows_;
  std::vector<double> values_;
  double min_ = 0, max_ = 0, max_abs_ = 0, variation_ = 0;
};

/// S_n phi over w. Empty words sum to zero. Throws InadmissibleWord on a
/// forbidden transition and InvalidArgument when a truncated sum is requested
/// for 0 < |w| < d.
double birkhoff_sum(const Word& w, const CenterCocycle& c,
                    BoundaryMode mode = BoundaryMode::kTruncated);

/// birkhoff_sum(w) / |w|; requires |w| >= 1.
double finite_time_exponent(const Word& w, const CenterCocycle& c,
                            BoundaryMode mode = BoundaryMode::kTruncated);

/// Running sums S_1, ..., S_|w| (truncated mode: entry i is the sum of the
/// windows fully inside the first i + 1 symbols).
std::vector<double> prefix_sums(const Word& w, const CenterCocycle& c);

}  // namespace spectra
