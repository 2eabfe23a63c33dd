#include "spectra/word_dag.hpp"

#include <algorithm>
#include <cmath>

#include "spectra/errors.hpp"

namespace spectra {

WordDag::WordDag(int alphabet_size, std::size_t length)
    : k_(alphabet_size), length_(length), layers_(length + 1) {
  if (k_ < 1) throw InvalidArgument("alphabet size must be positive");
  add_node(0);
}

WordDag WordDag::from_words(int alphabet_size, const std::vector<Word>& words) {
  if (words.empty()) throw InvalidArgument("cannot build a word set from an empty list");
  const std::size_t m = words.front().size();
  WordDag dag(alphabet_size, m);
  for (const Word& w : words) {
    if (w.size() != m) throw InvalidArgument("all words of a family must share one length");
    std::int32_t node = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (w[i] >= alphabet_size) throw InvalidArgument("symbol outside the alphabet in '" + w.str() + "'");
      std::int32_t next = dag.child(i, node, w[i]);
      if (next == kNone) {
        next = dag.add_node(i + 1);
        dag.set_child(i, node, w[i], next);
      }
      node = next;
    }
  }
  dag.finalize();
  return dag;
}

std::int32_t WordDag::add_node(std::size_t layer) {
  Layer& l = layers_[layer];
  const auto id = static_cast<std::int32_t>(l.size++);
  l.children.resize(l.size * static_cast<std::size_t>(k_), kNone);
  if (layer == length_) accepting_.push_back(1);
  return id;
}

void WordDag::set_child(std::size_t layer, std::int32_t node, Symbol s, std::int32_t child) {
  layers_[layer].children[static_cast<std::size_t>(node) * static_cast<std::size_t>(k_) + s] = child;
}

void WordDag::set_accepting(std::int32_t leaf, bool accepting) {
  accepting_[static_cast<std::size_t>(leaf)] = accepting ? 1 : 0;
}

void WordDag::finalize() {
  Layer& last = layers_[length_];
  last.completions.assign(last.size, BigInt(0));
  for (std::size_t i = 0; i < last.size; ++i) last.completions[i] = accepting_[i] ? 1 : 0;
  for (std::size_t r = length_; r-- > 0;) {
    Layer& l = layers_[r];
    const Layer& next = layers_[r + 1];
    l.completions.assign(l.size, BigInt(0));
    for (std::size_t i = 0; i < l.size; ++i)
      for (int s = 0; s < k_; ++s) {
        const std::int32_t c = l.children[i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(s)];
        if (c != kNone) l.completions[i] += next.completions[static_cast<std::size_t>(c)];
      }
  }
  for (auto& l : layers_) l.paths.assign(l.size, BigInt(0));
  layers_[0].paths[0] = 1;
  for (std::size_t r = 0; r < length_; ++r) {
    const Layer& l = layers_[r];
    Layer& next = layers_[r + 1];
    for (std::size_t i = 0; i < l.size; ++i) {
      if (l.completions[i] == 0) continue;
      for (int s = 0; s < k_; ++s) {
        const std::int32_t c = l.children[i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(s)];
        if (c != kNone) next.paths[static_cast<std::size_t>(c)] += l.paths[i];
      }
    }
  }
  distinct_prefixes_.assign(length_ + 1, BigInt(0));
  max_completions_.assign(length_ + 1, BigInt(0));
  for (std::size_t r = 0; r <= length_; ++r) {
    const Layer& l = layers_[r];
    for (std::size_t i = 0; i < l.size; ++i) {
      if (l.completions[i] == 0 || l.paths[i] == 0) continue;
      distinct_prefixes_[r] += l.paths[i];
      if (l.completions[i] > max_completions_[r]) max_completions_[r] = l.completions[i];
    }
  }
  // Branch probabilities for the fast walk sampler.
  for (std::size_t r = 0; r < length_; ++r) {
    Layer& l = layers_[r];
    const Layer& next = layers_[r + 1];
    l.cumulative.assign(l.size * static_cast<std::size_t>(k_), 0.0);
    for (std::size_t i = 0; i < l.size; ++i) {
      if (l.completions[i] == 0) continue;
      const double log_total = log_big(l.completions[i]);
      double acc = 0.0;
      for (int s = 0; s < k_; ++s) {
        const std::size_t slot = i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(s);
        const std::int32_t c = l.children[slot];
        if (c != kNone && next.completions[static_cast<std::size_t>(c)] > 0)
          acc += std::exp(log_big(next.completions[static_cast<std::size_t>(c)]) - log_total);
        l.cumulative[slot] = acc;
      }
    }
  }
  finalized_ = true;
}

std::size_t WordDag::total_nodes() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.size;
  return n;
}

const BigInt& WordDag::count() const {
  if (!finalized_) throw InvalidArgument("WordDag used before finalize()");
  return layers_[0].completions[0];
}

bool WordDag::contains(const Word& w) const {
  return w.size() == length_ && completions_of_prefix(w.symbols()) == 1;
}

BigInt WordDag::completions_of_prefix(std::span<const Symbol> prefix) const {
  if (prefix.size() > length_) return 0;
  std::int32_t node = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] >= k_) return 0;
    node = child(i, node, prefix[i]);
    if (node == kNone) return 0;
  }
  return completions(prefix.size(), node);
}

Word WordDag::unrank(const BigInt& index) const {
  if (index < 0 || index >= count()) throw InvalidArgument("unrank index out of range");
  BigInt rest = index;
  std::vector<Symbol> out;
  out.reserve(length_);
  std::int32_t node = 0;
  for (std::size_t r = 0; r < length_; ++r) {
    for (int s = 0; s < k_; ++s) {
      const std::int32_t c = child(r, node, static_cast<Symbol>(s));
      if (c == kNone) continue;
      const BigInt& sub = completions(r + 1, c);
      if (rest < sub) {
        out.push_back(static_cast<Symbol>(s));
        node = c;
        break;
      }
      rest -= sub;
    }
  }
  return Word(std::move(out));
}

BigInt WordDag::rank(const Word& w) const {
  if (w.size() != length_) throw InvalidArgument("word length differs from the family length");
  BigInt r = 0;
  std::int32_t node = 0;
  for (std::size_t i = 0; i < length_; ++i) {
    for (int s = 0; s < w[i]; ++s) {
      const std::int32_t c = child(i, node, static_cast<Symbol>(s));
      if (c != kNone) r += completions(i + 1, c);
    }
    node = child(i, node, w[i]);
    if (node == kNone) throw InvalidArgument("'" + w.str() + "' is not a member");
  }
  if (completions(length_, node) == 0) throw InvalidArgument("'" + w.str() + "' is not a member");
  return r;
}

Word WordDag::sample(std::mt19937_64& rng) const { return unrank(uniform_below(count(), rng)); }

void WordDag::sample_walk(std::mt19937_64& rng, Word& out) const {
  if (empty()) throw InvalidArgument("cannot sample an empty word set");
  std::int32_t node = 0;
  for (std::size_t r = 0; r < length_; ++r) {
    const Layer& l = layers_[r];
    const std::size_t base = static_cast<std::size_t>(node) * static_cast<std::size_t>(k_);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * l.cumulative[base + static_cast<std::size_t>(k_) - 1];
    int pick = -1;
    for (int s = 0; s < k_; ++s) {
      const std::int32_t c = l.children[base + static_cast<std::size_t>(s)];
      if (c == kNone || layers_[r + 1].completions[static_cast<std::size_t>(c)] == 0) continue;
      pick = s;  // last live child absorbs rounding at the top of the range
      if (u < l.cumulative[base + static_cast<std::size_t>(s)]) break;
    }
    out.push_back(static_cast<Symbol>(pick));
    node = l.children[base + static_cast<std::size_t>(pick)];
  }
}

std::vector<Word> WordDag::materialize(std::size_t limit) const {
  if (count() > limit)
    throw BudgetExceeded("family has " + count().str() + " words, above the materialization limit " +
                         std::to_string(limit));
  const auto n = count().convert_to<std::size_t>();
  std::vector<Word> out;
  out.reserve(n);
  // Depth-first walk in symbol order yields lexicographic order.
  std::vector<std::int32_t> nodes(length_ + 1, 0);
  std::vector<int> next_symbol(length_ + 1, 0);
  std::vector<Symbol> current(length_);
  std::size_t depth = 0;
  if (length_ == 0) {
    if (n == 1) out.emplace_back();
    return out;
  }
  for (;;) {
    if (depth == length_) {
      if (completions(length_, nodes[length_]) > 0) out.emplace_back(current);
      --depth;
      continue;
    }
    bool descended = false;
    while (next_symbol[depth] < k_) {
      const int s = next_symbol[depth]++;
      const std::int32_t c = child(depth, nodes[depth], static_cast<Symbol>(s));
      if (c != kNone && completions(depth + 1, c) > 0) {
        current[depth] = static_cast<Symbol>(s);
        nodes[depth + 1] = c;
        ++depth;
        if (depth < length_) next_symbol[depth] = 0;
        descended = true;
        break;
      }
    }
    if (descended) continue;
    if (depth == 0) break;
    --depth;
  }
  return out;
}

}  // namespace spectra
