#include "spectra/enumerate.hpp"

#include <algorithm>
#include <sstream>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

bool exceeds_budget(int k, std::size_t n, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > budget / static_cast<std::uint64_t>(k)) return true;
    total *= static_cast<std::uint64_t>(k);
  }
  return total > budget;
}

void require_lengths(const std::vector<Word>& words, std::size_t depth) {
  std::vector<std::size_t> short_ones;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].size() < depth) short_ones.push_back(i);
  if (short_ones.empty()) return;
  std::ostringstream os;
  os << "words shorter than the required depth " << depth << ":";
  for (std::size_t i = 0; i < short_ones.size() && i < 8; ++i)
    os << " #" << short_ones[i] << " '" << words[short_ones[i]].str() << "'";
  if (short_ones.size() > 8) os << " ... (" << short_ones.size() << " total)";
  throw InvalidArgument(os.str());
}

}  // namespace

WordStream::WordStream(const SymbolicSystem& system, std::size_t n, std::uint64_t budget)
    : system_(&system), n_(n) {
  if (n == 0) throw InvalidArgument("word length must be at least 1");
  if (exceeds_budget(system.alphabet_size(), n, budget))
    throw BudgetExceeded("enumerating words of length " + std::to_string(n) + " over " +
                         std::to_string(system.alphabet_size()) +
                         " symbols exceeds the enumeration budget of " + std::to_string(budget) +
                         " words");
  current_.assign(n, 0);
}

// Irreducible systems have no dead ends, so the greedy least completion of
// any admissible prefix is admissible.
bool WordStream::advance_from(std::size_t position) {
  const int k = system_->alphabet_size();
  for (std::size_t i = position; i < n_; ++i) {
    bool placed = false;
    for (int c = 0; c < k && !placed; ++c) {
      if (i == 0 || system_->allowed(current_[i - 1], static_cast<Symbol>(c))) {
        current_[i] = static_cast<Symbol>(c);
        placed = true;
      }
    }
    if (!placed) return false;
  }
  return true;
}

bool WordStream::next(Word& out) {
  if (done_) return false;
  bool ok = false;
  if (!started_) {
    started_ = true;
    ok = advance_from(0);
  } else {
    const int k = system_->alphabet_size();
    for (std::size_t i = n_; i-- > 0 && !ok;) {
      for (int c = current_[i] + 1; c < k; ++c) {
        if (i == 0 || system_->allowed(current_[i - 1], static_cast<Symbol>(c))) {
          current_[i] = static_cast<Symbol>(c);
          ok = advance_from(i + 1);
          break;
        }
      }
    }
  }
  if (!ok) {
    done_ = true;
    return false;
  }
  out = Word(current_);
  return true;
}

std::vector<Word> enumerate_words(const SymbolicSystem& system, std::size_t n, std::uint64_t budget) {
  WordStream stream(system, n, budget);
  std::vector<Word> out;
  Word w;
  while (stream.next(w)) out.push_back(w);
  return out;
}

BigInt count_admissible(const SymbolicSystem& system, std::size_t n) {
  if (n == 0) return 1;
  const int k = system.alphabet_size();
  std::vector<BigInt> ending(static_cast<std::size_t>(k), BigInt(1));
  for (std::size_t len = 1; len < n; ++len) {
    std::vector<BigInt> next(static_cast<std::size_t>(k), BigInt(0));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (system.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b))) next[b] += ending[a];
    ending.swap(next);
  }
  BigInt total = 0;
  for (const auto& x : ending) total += x;
  return total;
}

std::size_t separated_count(const std::vector<Word>& words, std::size_t n, Resolution res) {
  const std::size_t depth = res.cylinder_depth(n);
  require_lengths(words, depth);
  std::vector<std::span<const Symbol>> prefixes;
  prefixes.reserve(words.size());
  for (const Word& w : words) prefixes.push_back(w.symbols().first(depth));
  auto less = [](std::span<const Symbol> a, std::span<const Symbol> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  std::sort(prefixes.begin(), prefixes.end(), less);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < prefixes.size(); ++i)
    if (i == 0 || less(prefixes[i - 1], prefixes[i])) ++distinct;
  return distinct;
}

std::vector<Word> thin_to_separated(std::vector<Word> words, std::size_t n, Resolution res) {
  const std::size_t depth = res.cylinder_depth(n);
  require_lengths(words, depth);
  std::sort(words.begin(), words.end());
  std::vector<Word> out;
  for (Word& w : words) {
    if (!out.empty() && std::equal(out.back().symbols().begin(),
                                   out.back().symbols().begin() + static_cast<std::ptrdiff_t>(depth),
                                   w.symbols().begin()))
      continue;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace spectra
