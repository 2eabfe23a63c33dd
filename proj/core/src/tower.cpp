#include "spectra/tower.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <sstream>
#include <unordered_map>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

Word join_word(const SymbolicSystem& sys, Symbol a, Symbol b, std::size_t length) {
  if (length == 0) {
    if (!sys.allowed(a, b))
      throw InvalidArgument("cannot join " + std::string(1, symbol_char(a)) + " to " + std::string(1, symbol_char(b)) +
                            " without a connecting word");
    return {};
  }
  if (length == sys.bridge_length()) return sys.bridge(a, b);
  return sys.connect(a, b, length);
}

std::mt19937_64 member_rng(std::uint64_t seed, std::size_t i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32)};
  return std::mt19937_64(seq);
}

struct PrefixHash {
  std::uint64_t a = 0xcbf29ce484222325ULL;
  std::uint64_t b = 0x84222325cbf29ce4ULL;
  void add(Symbol s) {
    a = (a ^ s) * 0x100000001b3ULL;
    b = (b + s + 1) * 0x9E3779B97F4A7C15ULL;
    b ^= b >> 29;
  }
  bool operator==(const PrefixHash& o) const { return a == o.a && b == o.b; }
};

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    return static_cast<std::size_t>(p.first ^ (p.second * 0x9E3779B97F4A7C15ULL));
  }
};

}  // namespace

Word concat_map_psi(const SymbolicSystem& sys, const std::vector<Word>& blocks, std::size_t ell) {
  if (ell < sys.bridge_length())
    throw InvalidArgument("gap " + std::to_string(ell) + " is shorter than the specification gap " +
                          std::to_string(sys.bridge_length()));
  Word out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Word& b = blocks[i];
    if (b.size() == 0) throw InvalidArgument("empty block");
    sys.require_admissible(b);
    if (i > 0) out.append(join_word(sys, out.back(), b.front(), ell));
    out.append(b);
  }
  return out;
}

void finalize_times(Schedule& s) {
  std::uint64_t t = 0;
  for (auto& L : s.levels) {
    L.T = L.N * (L.n + L.ell);
    t += L.T + L.m;
    L.t = t;
  }
}

Schedule with_bridge(const Schedule& s, std::size_t level, std::size_t m) {
  Schedule out = s;
  out.levels.at(level - 1).m = m;
  finalize_times(out);
  return out;
}

std::vector<Skeleton> schedule_skeletons(const CenterCocycle& c, const Schedule& s, std::size_t state_budget) {
  std::vector<Skeleton> out;
  out.reserve(s.depth());
  for (const auto& L : s.levels) {
    SkeletonParams p;
    p.alpha = L.chi;
    p.eps_E = L.eps_E;
    p.eps_H = L.eps;
    p.h_target = L.h;
    p.m = L.n;
    p.K0 = s.K0;
    p.state_budget = state_budget;
    out.push_back(extract_preskeleton(c, p));
  }
  return out;
}

const char* to_string(Segment::Kind kind) {
  switch (kind) {
    case Segment::Kind::kBlock: return "block";
    case Segment::Kind::kGap: return "gap";
    case Segment::Kind::kBridge: return "bridge";
  }
  return "?";
}

FamilyTower::FamilyTower(const CenterCocycle& c, Schedule schedule, std::vector<Skeleton> skeletons,
                         const TowerOptions& options)
    : system_(c.system()), schedule_(std::move(schedule)), skeletons_(std::move(skeletons)), options_(options) {
  const std::size_t K = schedule_.depth();
  if (K == 0) throw InvalidArgument("tower needs at least one level");
  if (skeletons_.size() != K) throw InvalidArgument("one skeleton per level is required");
  std::uint64_t t = 0;
  for (std::size_t k = 1; k <= K; ++k) {
    const auto& L = schedule_.level(k);
    const Skeleton& S = skeletons_[k - 1];
    if (S.m != L.n) throw InvalidArgument("level " + std::to_string(k) + " skeleton length differs from n_k");
    if (S.words.empty()) throw InvalidArgument("level " + std::to_string(k) + " skeleton is empty");
    if (L.N == 0) throw InvalidArgument("N_k must be positive");
    if (L.ell < system_.bridge_length() || (k < K && L.m < system_.bridge_length()))
      throw InvalidArgument("gaps and bridges must be at least the specification gap");
    if (L.T != L.N * (L.n + L.ell) || L.t != t + L.T + L.m)
      throw InvalidArgument("schedule times are inconsistent at level " + std::to_string(k));
    t = L.t;
  }
  BigInt running = 1;
  for (std::size_t k = 1; k <= K; ++k) {
    const auto N = static_cast<unsigned>(schedule_.level(k).N);
    card_D_.push_back(boost::multiprecision::pow(skeletons_[k - 1].cardinality(), N));
    running *= card_D_.back();
    card_E_.push_back(running);
  }
  // Layout.
  for (std::size_t k = 1; k <= K; ++k) {
    const auto& L = schedule_.level(k);
    std::uint64_t pos = schedule_.t(k - 1);
    for (std::uint64_t i = 0; i < L.N; ++i) {
      layout_.push_back({Segment::Kind::kBlock, k, i, pos, L.n});
      pos += L.n;
      if (L.ell > 0) layout_.push_back({Segment::Kind::kGap, k, i, pos, L.ell});
      pos += L.ell;
    }
    if (k < K && L.m > 0) layout_.push_back({Segment::Kind::kBridge, k, 0, pos, L.m});
  }
  if (card_E_.back() <= options_.budget) {
    explicit_ = true;
    member_count_ = static_cast<std::size_t>(card_E_.back());
    for (const auto& S : skeletons_) listed_.push_back(S.words.materialize(static_cast<std::size_t>(options_.budget)));
  } else {
    if (!options_.allow_subsample)
      throw BudgetExceeded("card E_K = " + to_string(card_E_.back()) + " exceeds the budget " +
                           std::to_string(options_.budget) + " and sub-sampling is disabled");
    member_count_ = options_.sample_size;
  }
}

Word FamilyTower::gap_after(std::size_t k, const Word& block, const Word* next_block) const {
  const auto& L = schedule_.level(k);
  if (next_block) return join_word(system_, block.back(), next_block->front(), L.ell);
  return L.ell == 0 ? Word{} : system_.continuation(block.back(), L.ell);
}

Word FamilyTower::assemble(const std::vector<std::vector<Word>>& blocks) const {
  Word out;
  out.reserve(static_cast<std::size_t>(word_length(blocks.size())));
  for (std::size_t k = 1; k <= blocks.size(); ++k) {
    const auto& level = blocks[k - 1];
    if (k > 1) {
      const auto& prev = schedule_.level(k - 1);
      out.append(join_word(system_, out.back(), level.front().front(), prev.m));
    }
    for (std::size_t i = 0; i < level.size(); ++i) {
      out.append(level[i]);
      out.append(gap_after(k, level[i], i + 1 < level.size() ? &level[i + 1] : nullptr));
    }
  }
  return out;
}

Word FamilyTower::member(std::size_t i) const {
  if (i >= member_count_) throw InvalidArgument("member index out of range");
  const std::size_t K = depth();
  std::vector<std::vector<Word>> blocks(K);
  if (explicit_) {
    // Mixed radix, first block most significant.
    std::uint64_t rest = i;
    for (std::size_t k = K; k >= 1; --k) {
      const auto& list = listed_[k - 1];
      blocks[k - 1].resize(static_cast<std::size_t>(schedule_.level(k).N));
      for (std::size_t b = blocks[k - 1].size(); b-- > 0;) {
        blocks[k - 1][b] = list[rest % list.size()];
        rest /= list.size();
      }
    }
  } else {
    std::mt19937_64 rng = member_rng(options_.seed, i);
    for (std::size_t k = 1; k <= K; ++k) {
      const std::size_t N = static_cast<std::size_t>(schedule_.level(k).N);
      blocks[k - 1].resize(N);
      for (std::size_t b = 0; b < N; ++b) {
        if (i == 0)
          blocks[k - 1][b] = skeletons_[k - 1].words.unrank(0);
        else
          skeletons_[k - 1].words.sample_walk(rng, blocks[k - 1][b]);
      }
    }
  }
  return assemble(blocks);
}

const Segment& FamilyTower::segment_at(std::uint64_t pos) const {
  auto it = std::upper_bound(layout_.begin(), layout_.end(), pos,
                             [](std::uint64_t p, const Segment& s) { return p < s.start; });
  if (it == layout_.begin()) throw InvalidArgument("position before the layout");
  --it;
  if (pos >= it->start + it->length) throw InvalidArgument("position outside the layout");
  return *it;
}

std::optional<std::vector<Word>> FamilyTower::decode(const Word& w, std::size_t k) const {
  if (k == 0 || k > depth() || w.size() < word_length(k)) return std::nullopt;
  if (!system_.admissible(w.prefix(static_cast<std::size_t>(word_length(k))))) return std::nullopt;
  std::vector<Word> out;
  for (std::size_t j = 1; j <= k; ++j) {
    const auto& L = schedule_.level(j);
    std::uint64_t pos = schedule_.t(j - 1);
    Word prev_end;
    for (std::uint64_t b = 0; b < L.N; ++b) {
      Word block = w.slice(static_cast<std::size_t>(pos), L.n);
      if (!skeletons_[j - 1].words.contains(block)) return std::nullopt;
      pos += L.n;
      Word next;
      const bool inner = b + 1 < L.N;
      if (inner) next = w.slice(static_cast<std::size_t>(pos + L.ell), L.n);
      const Word gap = gap_after(j, block, inner ? &next : nullptr);
      if (w.slice(static_cast<std::size_t>(pos), L.ell) != gap) return std::nullopt;
      pos += L.ell;
      out.push_back(std::move(block));
    }
    if (j < k) {
      const Symbol a = w[static_cast<std::size_t>(pos) - 1];
      const Symbol b = w[static_cast<std::size_t>(pos + L.m)];
      if (w.slice(static_cast<std::size_t>(pos), L.m) != join_word(system_, a, b, L.m)) return std::nullopt;
    }
  }
  return out;
}

FamilyTower build_tower(const CenterCocycle& c, const Schedule& schedule, std::vector<Skeleton> skeletons,
                        const TowerOptions& options) {
  return FamilyTower(c, schedule, std::move(skeletons), options);
}

TowerCheck verify_tower(const FamilyTower& tower) {
  TowerCheck r;
  std::ostringstream issues;
  const std::size_t K = tower.depth();

  // Cardinality identity, recomputed by repeated multiplication.
  r.cardinality_ok = true;
  BigInt previous = 1;
  for (std::size_t k = 1; k <= K; ++k) {
    BigInt d = 1;
    for (std::uint64_t i = 0; i < tower.schedule().level(k).N; ++i) d *= tower.skeleton(k).cardinality();
    if (d != tower.card_D(k) || tower.card_E(k) != previous * d) {
      r.cardinality_ok = false;
      issues << "cardinality identity fails at level " << k << "; ";
    }
    previous = tower.card_E(k);
  }

  // Nesting and separation over the retained members.
  r.nesting_ok = true;
  r.separation_ok = true;
  const std::size_t count = tower.member_count();
  // prefix hash per level -> block-choice hash; plus multiplicities.
  std::vector<std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>, PairHash>>
      seen(K);
  std::vector<std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t, PairHash>> multiplicity(K);
  for (std::size_t i = 0; i < count; ++i) {
    const Word w = tower.member(i);
    ++r.members_checked;
    const auto blocks = tower.decode(w, K);
    if (!blocks) {
      r.nesting_ok = false;
      issues << "member " << i << " does not decode; ";
      continue;
    }
    PrefixHash prefix, choice;
    std::size_t block_index = 0;
    std::uint64_t pos = 0;
    for (std::size_t k = 1; k <= K; ++k) {
      const auto lower = tower.decode(w, k);
      for (std::uint64_t b = 0; b < tower.schedule().level(k).N; ++b, ++block_index) {
        for (std::size_t s = 0; s < (*blocks)[block_index].size(); ++s) choice.add((*blocks)[block_index][s]);
        choice.add(static_cast<Symbol>(255));
      }
      if (!lower || lower->size() != block_index ||
          !std::equal(lower->begin(), lower->end(), blocks->begin())) {
        r.nesting_ok = false;
        issues << "member " << i << " has an inconsistent level-" << k << " prefix; ";
      }
      for (; pos < tower.word_length(k); ++pos) prefix.add(w[static_cast<std::size_t>(pos)]);
      const auto key = std::make_pair(prefix.a, prefix.b);
      const auto val = std::make_pair(choice.a, choice.b);
      auto [it, inserted] = seen[k - 1].try_emplace(key, val);
      if (!inserted && it->second != val) {
        r.separation_ok = false;
        issues << "two block choices share a level-" << k << " prefix; ";
      }
      ++multiplicity[k - 1][key];
    }
  }
  if (tower.is_explicit()) {
    for (std::size_t k = 1; k <= K; ++k) {
      const BigInt expected_each = tower.card_E(K) / tower.card_E(k);
      if (BigInt(seen[k - 1].size()) != tower.card_E(k)) {
        r.separation_ok = false;
        issues << "level " << k << " has " << seen[k - 1].size() << " distinct prefixes, expected "
               << to_string(tower.card_E(k)) << "; ";
      }
      for (const auto& [key, mult] : multiplicity[k - 1])
        if (BigInt(mult) != expected_each) {
          r.nesting_ok = false;
          issues << "a level-" << k << " prefix has " << mult << " extensions; ";
          break;
        }
    }
  }
  r.detail = r.ok() ? "cardinality, nesting and separation verified" : issues.str();
  return r;
}

std::vector<Word> limsup_points(const FamilyTower& tower, std::size_t count, std::optional<std::uint64_t> length) {
  const std::uint64_t full = tower.word_length(tower.depth());
  const std::uint64_t len = std::min(length.value_or(full), full);
  std::vector<Word> out;
  const std::size_t n = std::min(count, tower.member_count());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(tower.member(i).prefix(static_cast<std::size_t>(len)));
  return out;
}

}  // namespace spectra
