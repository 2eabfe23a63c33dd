#include "spectra/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

constexpr double kEndSlopeQ = 50.0;

// Strongly connected components (Kosaraju); returns component id per vertex.
std::vector<int> components(const CocycleGraph& g, int& count) {
  const std::size_t n = g.states;
  std::vector<std::vector<std::uint32_t>> rev(n);
  for (const auto& e : g.edges) rev[e.to].push_back(e.from);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{static_cast<std::uint32_t>(root), g.first_edge[root]}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < g.first_edge[v + 1]) {
        const std::uint32_t to = g.edges[next++].to;
        if (!seen[to]) {
          seen[to] = 1;
          stack.push_back({to, g.first_edge[to]});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    std::vector<std::uint32_t> stack{*it};
    comp[*it] = count;
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t u : rev[v])
        if (comp[u] < 0) {
          comp[u] = count;
          stack.push_back(u);
        }
    }
    ++count;
  }
  return comp;
}

std::vector<std::size_t> kmp_failure(const Word& p) {
  std::vector<std::size_t> fail(p.size(), 0);
  for (std::size_t i = 1, j = 0; i < p.size(); ++i) {
    while (j > 0 && p[i] != p[j]) j = fail[j - 1];
    if (p[i] == p[j]) ++j;
    fail[i] = j;
  }
  return fail;
}

}  // namespace

const char* to_string(Restriction r) {
  switch (r) {
    case Restriction::kNone: return "none";
    case Restriction::kNegative: return "negative_exponent";
    case Restriction::kPositive: return "positive_exponent";
  }
  return "?";
}

PressureFunction::PressureFunction(const CenterCocycle& c)
    : graph_(cocycle_graph(c)), lipschitz_(c.max_abs()) {
  alpha_min_ = min_mean_cycle(graph_);
  alpha_max_ = max_mean_cycle(graph_);
}

double pressure_full(const CenterCocycle& c, double q) { return PressureFunction(c)(q); }

double topological_entropy(const SymbolicSystem& sys) {
  const CenterCocycle zero = CenterCocycle::locally_constant(
      sys, std::vector<double>(static_cast<std::size_t>(sys.alphabet_size()), 0.0));
  return perron(cocycle_graph(zero), 0.0).log_radius;
}

std::vector<double> linear_grid(double a, double b, std::size_t n) {
  if (n == 0) throw InvalidArgument("grid needs at least one point");
  if (n == 1) return {a};
  if (!(a < b)) throw InvalidArgument("grid bounds must satisfy a < b");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = b;
  return g;
}

PressureCurve pressure_curve(const CenterCocycle& c, std::vector<double> q_grid) {
  if (q_grid.empty()) throw InvalidArgument("empty q grid");
  if (!std::is_sorted(q_grid.begin(), q_grid.end()) ||
      std::adjacent_find(q_grid.begin(), q_grid.end()) != q_grid.end())
    throw InvalidArgument("q grid must be strictly increasing");
  auto fn = std::make_shared<const PressureFunction>(c);
  PressureCurve curve;
  curve.q_grid = std::move(q_grid);
  curve.values.reserve(curve.q_grid.size());
  curve.slopes.reserve(curve.q_grid.size());
  for (double q : curve.q_grid) {
    const PerronData d = fn->evaluate(q);
    curve.values.push_back(d.log_radius);
    curve.slopes.push_back(d.slope);
  }
  curve.alpha_min = fn->alpha_min();
  curve.alpha_max = fn->alpha_max();
  const double reach = std::max(kEndSlopeQ, std::max(std::abs(curve.q_grid.front()), std::abs(curve.q_grid.back())));
  curve.end_slope_min = fn->evaluate(-reach).slope;
  curve.end_slope_max = fn->evaluate(reach).slope;
  curve.restriction = Restriction::kNone;
  curve.evaluate = [fn](double q) { return (*fn)(q); };
  return curve;
}

double pressure_avoiding(const CenterCocycle& c, double q, const Word& pattern) {
  if (pattern.size() == 0) throw InvalidArgument("empty pattern forbids everything");
  const CocycleGraph base = cocycle_graph(c);
  const std::size_t L = pattern.size();
  const auto fail = kmp_failure(pattern);
  auto step = [&](std::size_t j, Symbol s) {
    while (j > 0 && pattern[j] != s) j = fail[j - 1];
    if (pattern[j] == s) ++j;
    return j;
  };
  // Product states (base state, matched prefix length < L).
  CocycleGraph prod;
  prod.states = base.states * L;
  for (const auto& e : base.edges)
    for (std::size_t j = 0; j < L; ++j) {
      const std::size_t nj = step(j, e.symbol);
      if (nj == L) continue;
      prod.edges.push_back({static_cast<std::uint32_t>(e.from * L + j), static_cast<std::uint32_t>(e.to * L + nj),
                            e.value, e.symbol});
    }
  std::stable_sort(prod.edges.begin(), prod.edges.end(),
                   [](const CocycleGraph::Edge& a, const CocycleGraph::Edge& b) { return a.from < b.from; });
  prod.first_edge.assign(prod.states + 1, 0);
  for (const auto& e : prod.edges) ++prod.first_edge[e.from + 1];
  for (std::size_t i = 0; i < prod.states; ++i) prod.first_edge[i + 1] += prod.first_edge[i];

  int count = 0;
  const std::vector<int> comp = components(prod, count);
  double best = -std::numeric_limits<double>::infinity();
  for (int id = 0; id < count; ++id) {
    CocycleGraph sub;
    std::vector<std::int64_t> local(prod.states, -1);
    for (std::size_t v = 0; v < prod.states; ++v)
      if (comp[v] == id) local[v] = static_cast<std::int64_t>(sub.states++);
    for (const auto& e : prod.edges)
      if (comp[e.from] == id && comp[e.to] == id)
        sub.edges.push_back({static_cast<std::uint32_t>(local[e.from]), static_cast<std::uint32_t>(local[e.to]),
                             e.value, e.symbol});
    if (sub.edges.empty()) continue;
    sub.first_edge.assign(sub.states + 1, 0);
    for (const auto& e : sub.edges) ++sub.first_edge[e.from + 1];
    for (std::size_t i = 0; i < sub.states; ++i) sub.first_edge[i + 1] += sub.first_edge[i];
    best = std::max(best, perron(sub, q, kPerronTolerance, kPerronMaxIterations, 1.0).log_radius);
  }
  return best;
}

}  // namespace spectra
