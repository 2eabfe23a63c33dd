#include "spectra/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectra/enumerate.hpp"
#include "spectra/errors.hpp"

namespace spectra {
namespace {

constexpr double kWindowSlack = 1e-9;

LatticeConstraint window_constraint(double alpha, double eps_E, double log_K0, std::size_t m) {
  LatticeConstraint lc;
  lc.length = m;
  lc.prefix_ok = [=](std::size_t l, double s) { return within_window(s, l, alpha, log_K0, eps_E); };
  return lc;
}

}  // namespace

double default_K0(const CenterCocycle& c) { return std::exp(static_cast<double>(c.depth()) * c.max_abs()); }

bool within_window(double partial_sum, std::size_t l, double alpha, double log_K0, double eps_E) {
  const double ll = static_cast<double>(l);
  return std::abs(partial_sum - ll * alpha) <= log_K0 + ll * eps_E + kWindowSlack;
}

double minimal_feasible_K0(const CenterCocycle& c, double alpha, double eps_E, std::size_t m,
                           std::size_t state_budget) {
  auto feasible = [&](double log_K0) {
    return count_lattice_words(c, window_constraint(alpha, eps_E, log_K0, m), state_budget) > 0;
  };
  double lo = 0.0;
  double hi = static_cast<double>(m) * (c.max_abs() + std::abs(alpha)) + 1.0;
  if (feasible(lo)) return 1.0;
  if (!feasible(hi)) throw EmptyDomain("no admissible word of length " + std::to_string(m));
  for (int it = 0; it < 200 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return std::exp(hi);
}

Skeleton extract_preskeleton(const CenterCocycle& c, const SkeletonParams& params) {
  if (params.m == 0) throw InvalidArgument("skeleton length m must be at least 1");
  if (!(params.eps_E >= 0.0)) throw InvalidArgument("eps_E must be non-negative");
  const double K0 = params.K0.value_or(default_K0(c));
  if (!(K0 > 0.0) || !std::isfinite(K0)) throw InvalidArgument("K0 must be positive and finite");
  Skeleton s;
  s.alpha = params.alpha;
  s.eps_E = params.eps_E;
  s.eps_H = params.eps_H;
  s.h_target = params.h_target;
  s.K0 = K0;
  s.m = params.m;
  s.res = params.res;
  const double log_K0 = std::log(K0);
  s.words = build_lattice_dag(c, window_constraint(params.alpha, params.eps_E, log_K0, params.m), params.state_budget);
  if (s.words.empty()) {
    const double suggestion = minimal_feasible_K0(c, params.alpha, params.eps_E, params.m, params.state_budget);
    std::ostringstream os;
    os << "empty skeleton window at alpha=" << params.alpha << ", eps_E=" << params.eps_E << ", m=" << params.m
       << " with K0=" << K0 << "; the smallest feasible K0 is " << suggestion;
    throw EmptyWindow(suggestion, os.str());
  }
  s.certified_rate = log_big(s.words.count()) / static_cast<double>(params.m);
  s.success = s.certified_rate >= params.h_target - params.eps_H;
  return s;
}

BigInt window_count_by_enumeration(const CenterCocycle& c, double alpha, double eps_E, double K0, std::size_t m) {
  const double log_K0 = std::log(K0);
  if (!within_window(0.0, 0, alpha, log_K0, eps_E)) return 0;
  WordStream stream(c.system(), m);
  Word w;
  BigInt count = 0;
  while (stream.next(w)) {
    const auto sums = prefix_sums(w, c);
    bool ok = true;
    for (std::size_t i = 0; i < sums.size() && ok; ++i) ok = within_window(sums[i], i + 1, alpha, log_K0, eps_E);
    if (ok) ++count;
  }
  return count;
}

SkeletonVerification verify_skeleton(const Skeleton& s, const CenterCocycle& c, std::mt19937_64& rng,
                                     std::size_t samples) {
  SkeletonVerification v;
  std::ostringstream issues;
  const WordDag& dag = s.words;
  const std::size_t d = static_cast<std::size_t>(c.depth());
  const std::size_t keep = std::max<std::size_t>(1, d - 1);
  const double log_K0 = std::log(s.K0);
  const int k = c.alphabet_size();

  v.window_ok = true;
  if (!within_window(0.0, 0, s.alpha, log_K0, s.eps_E)) {
    v.window_ok = false;
    issues << "empty prefix violates the window; ";
  }
  // Replay: every live node gets the sum and tail of the first path reaching it.
  std::vector<double> sum_now{0.0};
  std::vector<std::vector<Symbol>> tail_now{{}};
  std::vector<std::uint8_t> seen_now{1};
  for (std::size_t layer = 0; layer < dag.length() && v.window_ok; ++layer) {
    const std::size_t next_count = dag.node_count(layer + 1);
    std::vector<double> sum_next(next_count, 0.0);
    std::vector<std::vector<Symbol>> tail_next(next_count);
    std::vector<std::uint8_t> seen_next(next_count, 0);
    for (std::size_t node = 0; node < dag.node_count(layer); ++node) {
      const auto id = static_cast<std::int32_t>(node);
      if (!seen_now[node] || dag.completions(layer, id) == 0) continue;
      for (int sym = 0; sym < k; ++sym) {
        const std::int32_t ch = dag.child(layer, id, static_cast<Symbol>(sym));
        if (ch == WordDag::kNone || dag.completions(layer + 1, ch) == 0) continue;
        ++v.edges_checked;
        const auto& tail = tail_now[node];
        const auto s_sym = static_cast<Symbol>(sym);
        if (!tail.empty() && !c.system().allowed(tail.back(), s_sym)) {
          v.window_ok = false;
          issues << "forbidden transition inside the family at position " << layer << "; ";
          break;
        }
        double sum = sum_now[node];
        if (tail.size() + 1 >= d) {
          std::vector<Symbol> window(tail.end() - static_cast<std::ptrdiff_t>(d - 1), tail.end());
          window.push_back(s_sym);
          sum += c.value(window);
        }
        std::vector<Symbol> next_tail = tail;
        next_tail.push_back(s_sym);
        if (next_tail.size() > keep) next_tail.erase(next_tail.begin());
        const auto cn = static_cast<std::size_t>(ch);
        if (!seen_next[cn]) {
          seen_next[cn] = 1;
          sum_next[cn] = sum;
          tail_next[cn] = std::move(next_tail);
          if (!within_window(sum, layer + 1, s.alpha, log_K0, s.eps_E)) {
            v.window_ok = false;
            issues << "window violated at prefix length " << layer + 1 << " (S=" << sum << "); ";
          }
        } else if (std::abs(sum_next[cn] - sum) > kWindowSlack || tail_next[cn] != next_tail) {
          v.window_ok = false;
          issues << "inconsistent merge at prefix length " << layer + 1 << "; ";
        }
      }
    }
    sum_now.swap(sum_next);
    tail_now.swap(tail_next);
    seen_now.swap(seen_next);
  }

  // Direct recomputation on random members.
  std::vector<Word> drawn;
  if (!dag.empty()) {
    for (std::size_t i = 0; i < samples; ++i) {
      Word w = dag.sample(rng);
      ++v.samples_checked;
      if (auto bad = c.system().first_violation(w)) {
        v.window_ok = false;
        issues << "sampled member inadmissible at index " << *bad << "; ";
        continue;
      }
      const auto sums = prefix_sums(w, c);
      for (std::size_t l = 0; l < sums.size(); ++l)
        if (!within_window(sums[l], l + 1, s.alpha, log_K0, s.eps_E)) {
          v.window_ok = false;
          issues << "sampled member " << w.str() << " leaves the window at length " << l + 1 << "; ";
          break;
        }
      if (w.size() != s.m) {
        v.window_ok = false;
        issues << "sampled member has length " << w.size() << "; ";
      }
      drawn.push_back(std::move(w));
    }
  }

  // Separation: distinct members have distinct (m + j)-prefixes exactly when
  // their m-prefixes differ, i.e. when the family has no repeats.
  v.separation_ok = dag.distinct_prefixes(s.m) == dag.count();
  if (dag.count() <= 4096) {
    auto all = dag.materialize(4096);
    const std::size_t before = all.size();
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    v.separation_ok = v.separation_ok && all.size() == before &&
                      separated_count(all, s.m, Resolution{0}) == BigInt(before);
  } else {
    std::sort(drawn.begin(), drawn.end());
    drawn.erase(std::unique(drawn.begin(), drawn.end()), drawn.end());
    for (const Word& w : drawn) v.separation_ok = v.separation_ok && dag.contains(w);
  }
  if (!v.separation_ok) issues << "members are not pairwise separated; ";
  v.detail = v.ok() ? "window and separation verified" : issues.str();
  return v;
}

std::vector<std::pair<std::size_t, std::optional<double>>> skeleton_rate_curve(const CenterCocycle& c, double alpha,
                                                                               double eps_E, double K0,
                                                                               const std::vector<std::size_t>& m_list) {
  std::vector<std::pair<std::size_t, std::optional<double>>> out;
  for (std::size_t m : m_list) {
    SkeletonParams p;
    p.alpha = alpha;
    p.eps_E = eps_E;
    p.eps_H = 0.0;
    p.h_target = 0.0;
    p.m = m;
    p.K0 = K0;
    try {
      out.emplace_back(m, extract_preskeleton(c, p).certified_rate);
    } catch (const EmptyWindow&) {
      out.emplace_back(m, std::nullopt);
    }
  }
  return out;
}

}  // namespace spectra
