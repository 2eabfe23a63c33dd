#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "spectra/bigint.hpp"
#include "spectra/cocycle.hpp"
#include "spectra/word_dag.hpp"

namespace spectra {

/// Default cap on the number of DP states held in one layer.
inline constexpr std::size_t kDefaultStateBudget = std::size_t{1} << 22;

/// Constraint on admissible words of a fixed length, expressed through the
/// running Birkhoff sums. `prefix_ok(l, S_l)` is consulted for every prefix
/// length l = 0..length (truncated sums); `final_ok(S_n)` on complete words.
/// Either may be empty, meaning "always".
struct LatticeConstraint {
  std::size_t length = 0;
  std::function<bool(std::size_t, double)> prefix_ok;
  std::function<bool(double)> final_ok;
};

/// Exact count of admissible words meeting the constraint.
///
/// States are (last max(1, d-1) symbols, vector of occurrence counts per
/// distinct cocycle value). The Birkhoff sum is a function of the count
/// vector, so prefixes with equal states have equal sums and the count is
/// exact integer lattice-path counting. Throws BudgetExceeded when a layer
/// exceeds `state_budget` states.
BigInt count_lattice_words(const CenterCocycle& c, const LatticeConstraint& constraint,
                           std::size_t state_budget = kDefaultStateBudget);

/// Rolling count over lengths 1..max_length of words all of whose prefixes
/// pass `prefix_ok` (the constraint's `length` and `final_ok` are ignored).
/// `visit(l, count)` is called per length; returning false stops early.
void for_each_prefix_count(const CenterCocycle& c, const LatticeConstraint& constraint, std::size_t max_length,
                           const std::function<bool(std::size_t, const BigInt&)>& visit,
                           std::size_t state_budget = kDefaultStateBudget);

/// Same states, kept as a WordDag so the family can be ranked and sampled.
WordDag build_lattice_dag(const CenterCocycle& c, const LatticeConstraint& constraint,
                          std::size_t state_budget = kDefaultStateBudget);

/// Distinct values of the cocycle in ascending order; the count vectors are
/// indexed by this order.
std::vector<double> cocycle_value_classes(const CenterCocycle& c);

}  // namespace spectra
