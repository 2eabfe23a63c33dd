#include "spectra/lattice_dp.hpp"

#include <algorithm>
#include <unordered_map>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t x : key) {
      h ^= x;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Key layout: [tail code, tail length, count_0, ..., count_{v-1}].
class LatticeStates {
 public:
  explicit LatticeStates(const CenterCocycle& c) : c_(c), k_(static_cast<std::uint32_t>(c.alphabet_size())) {
    classes_ = cocycle_value_classes(c);
    class_of_.assign(c.window_count(), -1);
    for (std::size_t code = 0; code < c.window_count(); ++code) {
      if (!c.defined(code)) continue;
      const double v = c.value_by_code(code);
      class_of_[code] = static_cast<int>(std::lower_bound(classes_.begin(), classes_.end(), v) - classes_.begin());
    }
    depth_ = static_cast<std::uint32_t>(c.depth());
    tail_cap_ = std::max<std::uint32_t>(1, depth_ - 1);
    tail_mod_ = 1;
    for (std::uint32_t i = 0; i < tail_cap_; ++i) tail_mod_ *= k_;
  }

  std::vector<std::uint32_t> root() const {
    std::vector<std::uint32_t> key(2 + classes_.size(), 0);
    return key;
  }

  /// Appends s; returns false when the transition is forbidden.
  bool step(const std::vector<std::uint32_t>& key, Symbol s, std::vector<std::uint32_t>& out) const {
    const std::uint32_t tail = key[0], tail_len = key[1];
    if (tail_len > 0 && !c_.system().allowed(static_cast<Symbol>(tail % k_), s)) return false;
    out = key;
    if (tail_len + 1 >= depth_) {
      // A full window ends at s.
      const std::size_t code = depth_ == 1 ? s : static_cast<std::size_t>(tail) * k_ + s;
      const int cls = class_of_[code];
      if (cls < 0) return false;
      out[2 + static_cast<std::size_t>(cls)] += 1;
    }
    out[0] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(tail) * k_ + s) % tail_mod_);
    out[1] = std::min(tail_len + 1, tail_cap_);
    return true;
  }

  double sum(const std::vector<std::uint32_t>& key) const {
    double s = 0.0;
    for (std::size_t i = 0; i < classes_.size(); ++i) s += static_cast<double>(key[2 + i]) * classes_[i];
    return s;
  }

 private:
  const CenterCocycle& c_;
  std::uint32_t k_;
  std::uint32_t depth_ = 1;
  std::uint32_t tail_cap_ = 1;
  std::uint64_t tail_mod_ = 1;
  std::vector<double> classes_;
  std::vector<int> class_of_;
};

bool accepts_prefix(const LatticeConstraint& lc, std::size_t l, double s) {
  return !lc.prefix_ok || lc.prefix_ok(l, s);
}

void check_budget(std::size_t states, std::size_t budget, std::size_t layer) {
  if (states > budget)
    throw BudgetExceeded("lattice DP layer " + std::to_string(layer) + " holds " + std::to_string(states) +
                         " states, above the state budget " + std::to_string(budget));
}

}  // namespace

std::vector<double> cocycle_value_classes(const CenterCocycle& c) {
  std::vector<double> v = c.window_values();
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

BigInt count_lattice_words(const CenterCocycle& c, const LatticeConstraint& lc, std::size_t state_budget) {
  if (lc.length == 0) throw InvalidArgument("lattice length must be at least 1");
  const LatticeStates states(c);
  using Map = std::unordered_map<std::vector<std::uint32_t>, BigInt, KeyHash>;
  Map current;
  if (!accepts_prefix(lc, 0, 0.0)) return 0;
  current.emplace(states.root(), BigInt(1));
  std::vector<std::uint32_t> next_key;
  const int k = c.alphabet_size();
  for (std::size_t l = 0; l < lc.length; ++l) {
    Map next;
    for (const auto& [key, count] : current) {
      for (int s = 0; s < k; ++s) {
        if (!states.step(key, static_cast<Symbol>(s), next_key)) continue;
        if (!accepts_prefix(lc, l + 1, states.sum(next_key))) continue;
        next[next_key] += count;
      }
    }
    check_budget(next.size(), state_budget, l + 1);
    current.swap(next);
  }
  BigInt total = 0;
  for (const auto& [key, count] : current)
    if (!lc.final_ok || lc.final_ok(states.sum(key))) total += count;
  return total;
}

void for_each_prefix_count(const CenterCocycle& c, const LatticeConstraint& lc, std::size_t max_length,
                           const std::function<bool(std::size_t, const BigInt&)>& visit, std::size_t state_budget) {
  const LatticeStates states(c);
  using Map = std::unordered_map<std::vector<std::uint32_t>, BigInt, KeyHash>;
  Map current;
  if (!accepts_prefix(lc, 0, 0.0)) return;
  current.emplace(states.root(), BigInt(1));
  std::vector<std::uint32_t> next_key;
  const int k = c.alphabet_size();
  for (std::size_t l = 0; l < max_length; ++l) {
    Map next;
    for (const auto& [key, count] : current)
      for (int s = 0; s < k; ++s) {
        if (!states.step(key, static_cast<Symbol>(s), next_key)) continue;
        if (!accepts_prefix(lc, l + 1, states.sum(next_key))) continue;
        next[next_key] += count;
      }
    check_budget(next.size(), state_budget, l + 1);
    current.swap(next);
    BigInt total = 0;
    for (const auto& [key, count] : current) total += count;
    if (!visit(l + 1, total) || total == 0) return;
  }
}

WordDag build_lattice_dag(const CenterCocycle& c, const LatticeConstraint& lc, std::size_t state_budget) {
  if (lc.length == 0) throw InvalidArgument("lattice length must be at least 1");
  const LatticeStates states(c);
  const int k = c.alphabet_size();
  WordDag dag(k, lc.length);
  using Index = std::unordered_map<std::vector<std::uint32_t>, std::int32_t, KeyHash>;
  std::vector<std::vector<std::uint32_t>> current_keys{states.root()};
  if (!accepts_prefix(lc, 0, 0.0)) {
    // Root exists but nothing below it: the family is empty.
    dag.finalize();
    return dag;
  }
  std::vector<std::uint32_t> next_key;
  for (std::size_t l = 0; l < lc.length; ++l) {
    Index index;
    std::vector<std::vector<std::uint32_t>> next_keys;
    for (std::size_t node = 0; node < current_keys.size(); ++node) {
      for (int s = 0; s < k; ++s) {
        if (!states.step(current_keys[node], static_cast<Symbol>(s), next_key)) continue;
        if (!accepts_prefix(lc, l + 1, states.sum(next_key))) continue;
        auto [it, inserted] = index.try_emplace(next_key, 0);
        if (inserted) {
          it->second = dag.add_node(l + 1);
          next_keys.push_back(next_key);
        }
        dag.set_child(l, static_cast<std::int32_t>(node), static_cast<Symbol>(s), it->second);
      }
    }
    check_budget(next_keys.size(), state_budget, l + 1);
    current_keys.swap(next_keys);
  }
  if (lc.final_ok)
    for (std::size_t node = 0; node < current_keys.size(); ++node)
      dag.set_accepting(static_cast<std::int32_t>(node), lc.final_ok(states.sum(current_keys[node])));
  dag.finalize();
  return dag;
}

}  // namespace spectra
