#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "spectra/bigint.hpp"
#include "spectra/word.hpp"

namespace spectra {

/// A set of equal-length words stored as a layered deterministic automaton:
/// layer r holds one node per equivalence class of r-prefixes, and each node
/// has at most one child per symbol. Distinct root-to-leaf paths are distinct
/// words, so exact counts, lexicographic ranking and per-depth prefix
/// statistics all come from two dynamic-programming sweeps.
class WordDag {
 public:
  static constexpr std::int32_t kNone = -1;

  WordDag() = default;
  /// Empty automaton of the given word length, with a single root.
  WordDag(int alphabet_size, std::size_t length);

  /// Trie over an explicit list (duplicates collapse). All words must share
  /// one length.
  static WordDag from_words(int alphabet_size, const std::vector<Word>& words);

  // -- construction ---------------------------------------------------------
  std::int32_t add_node(std::size_t layer);
  void set_child(std::size_t layer, std::int32_t node, Symbol s, std::int32_t child);
  /// Marks a last-layer node as accepting (leaves default to accepting).
  void set_accepting(std::int32_t leaf, bool accepting);
  /// Computes completion and path counts. Must be called once after building.
  void finalize();

  // -- queries --------------------------------------------------------------
  int alphabet_size() const noexcept { return k_; }
  std::size_t length() const noexcept { return length_; }
  std::size_t node_count(std::size_t layer) const { return layers_[layer].size; }
  std::size_t total_nodes() const;
  std::int32_t child(std::size_t layer, std::int32_t node, Symbol s) const {
    return layers_[layer].children[static_cast<std::size_t>(node) * static_cast<std::size_t>(k_) + s];
  }
  const BigInt& completions(std::size_t layer, std::int32_t node) const {
    return layers_[layer].completions[static_cast<std::size_t>(node)];
  }
  const BigInt& paths(std::size_t layer, std::int32_t node) const {
    return layers_[layer].paths[static_cast<std::size_t>(node)];
  }

  /// Number of words.
  const BigInt& count() const;
  bool empty() const { return count() == 0; }

  bool contains(const Word& w) const;
  /// Words of the set extending `prefix` (0 when none).
  BigInt completions_of_prefix(std::span<const Symbol> prefix) const;

  /// The index-th word in lexicographic order; index < count().
  Word unrank(const BigInt& index) const;
  /// Lexicographic rank of a member; throws InvalidArgument otherwise.
  BigInt rank(const Word& w) const;
  Word sample(std::mt19937_64& rng) const;
  /// Appends a member drawn by a root-to-leaf walk with double-precision
  /// branch probabilities (uniform up to rounding, much faster than sample).
  void sample_walk(std::mt19937_64& rng, Word& out) const;

  /// Number of distinct r-prefixes of members, r in [0, length].
  const BigInt& distinct_prefixes(std::size_t r) const { return distinct_prefixes_[r]; }
  /// Largest number of members sharing one r-prefix.
  const BigInt& max_completions(std::size_t r) const { return max_completions_[r]; }

  /// All members in lexicographic order; throws BudgetExceeded above `limit`.
  std::vector<Word> materialize(std::size_t limit) const;

 private:
  struct Layer {
    std::size_t size = 0;
    std::vector<std::int32_t> children;  // size * k
    std::vector<BigInt> completions;
    std::vector<BigInt> paths;
    std::vector<double> cumulative;  // size * k, running branch probabilities
  };

  int k_ = 0;
  std::size_t length_ = 0;
  std::vector<Layer> layers_;
  std::vector<std::uint8_t> accepting_;
  std::vector<BigInt> distinct_prefixes_;
  std::vector<BigInt> max_completions_;
  bool finalized_ = false;
};

}  // namespace spectra
