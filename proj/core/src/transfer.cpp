#include "spectra/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void index_edges(CocycleGraph& g) {
  std::stable_sort(g.edges.begin(), g.edges.end(),
                   [](const CocycleGraph::Edge& a, const CocycleGraph::Edge& b) { return a.from < b.from; });
  g.first_edge.assign(g.states + 1, 0);
  for (const auto& e : g.edges) ++g.first_edge[e.from + 1];
  for (std::size_t i = 0; i < g.states; ++i) g.first_edge[i + 1] += g.first_edge[i];
}

// Karp's minimum mean cycle on a strongly connected graph.
double karp_min(const CocycleGraph& g, double sign) {
  const std::size_t n = g.states;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(n + 1, std::vector<double>(n, kInf));
  dist[0][0] = 0.0;
  for (std::size_t step = 1; step <= n; ++step)
    for (const auto& e : g.edges) {
      const double base = dist[step - 1][e.from];
      if (base == kInf) continue;
      dist[step][e.to] = std::min(dist[step][e.to], base + sign * e.value);
    }
  double best = kInf;
  for (std::size_t v = 0; v < n; ++v) {
    if (dist[n][v] == kInf) continue;
    double worst = -kInf;
    for (std::size_t step = 0; step < n; ++step) {
      if (dist[step][v] == kInf) continue;
      worst = std::max(worst, (dist[n][v] - dist[step][v]) / static_cast<double>(n - step));
    }
    best = std::min(best, worst);
  }
  return sign * best;
}

}  // namespace

CocycleGraph cocycle_graph(const CenterCocycle& c) {
  const SymbolicSystem& sys = c.system();
  const int k = sys.alphabet_size();
  CocycleGraph g;
  if (c.depth() == 1) {
    g.states = static_cast<std::size_t>(k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (sys.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b)))
          g.edges.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                             c.value_by_code(static_cast<std::size_t>(b)), static_cast<Symbol>(b)});
    index_edges(g);
    return g;
  }
  const std::size_t kk = static_cast<std::size_t>(k);
  const std::size_t tail_codes = ipow(kk, c.depth() - 1);
  std::vector<std::int64_t> index(tail_codes, -1);
  auto state_of = [&](std::size_t code) {
    if (index[code] < 0) index[code] = static_cast<std::int64_t>(g.states++);
    return static_cast<std::uint32_t>(index[code]);
  };
  // Number states in lexicographic order of the (d-1)-word.
  for (std::size_t code = 0; code < c.window_count(); ++code)
    if (c.defined(code)) {
      state_of(code / kk);
    }
  for (std::size_t code = 0; code < c.window_count(); ++code) {
    if (!c.defined(code)) continue;
    const std::size_t head = code / kk;
    const std::size_t tail = code % tail_codes;
    if (index[tail] < 0) continue;  // dead end: the suffix never starts a window
    g.edges.push_back({state_of(head), state_of(tail), c.value_by_code(code), static_cast<Symbol>(code % kk)});
  }
  index_edges(g);
  return g;
}

PerronData perron(const CocycleGraph& g, double q, double tol, int max_iterations, double lazy) {
  const std::size_t n = g.states;
  if (n == 0) throw InvalidArgument("transfer matrix has no states");
  // Tiny positive floor keeps underflowed edges from disconnecting the graph.
  constexpr double kFloor = 1e-290;

  auto iterate = [&](const std::vector<double>& weight, bool transpose, std::vector<double>& v, double shift_by,
                     int cap, double& radius) -> int {
    std::vector<double> w(n);
    for (int it = 1; it <= cap; ++it) {
      std::fill(w.begin(), w.end(), 0.0);
      if (!transpose) {
        for (std::size_t s = 0; s < n; ++s) {
          double acc = 0.0;
          for (std::size_t e = g.first_edge[s]; e < g.first_edge[s + 1]; ++e) acc += weight[e] * v[g.edges[e].to];
          w[s] = acc + shift_by * v[s];
        }
      } else {
        for (std::size_t s = 0; s < n; ++s) w[s] = shift_by * v[s];
        for (std::size_t e = 0; e < g.edges.size(); ++e) w[g.edges[e].to] += weight[e] * v[g.edges[e].from];
      }
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0, top = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        const double r = w[s] / v[s];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        top = std::max(top, w[s]);
      }
      if (!(top > 0.0)) throw ConvergenceError("transfer matrix iteration collapsed to zero");
      for (std::size_t s = 0; s < n; ++s) v[s] = std::max(w[s] / top, kFloor);
      if (lo > 0.0 && hi <= lo * (1.0 + tol)) {
        radius = 0.5 * (lo + hi);
        return it;
      }
    }
    throw ConvergenceError("power iteration did not reach relative tolerance " + std::to_string(tol) + " within " +
                           std::to_string(cap) + " iterations (q = " + std::to_string(q) + ")");
  };

  PerronData out;
  std::vector<double> weight(g.edges.size());
  double radius = 0.0;
  double log_scale = 0.0;
  auto solve = [&](double shift_by, int cap) {
    double radius_left = 0.0;
    out.right.assign(n, 1.0);
    out.left.assign(n, 1.0);
    out.iterations = iterate(weight, false, out.right, shift_by, cap, radius);
    out.iterations += iterate(weight, true, out.left, shift_by, cap, radius_left);
    radius -= shift_by;
  };

  // Exponents shifted so that every weight is at most 1.
  log_scale = -std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges) log_scale = std::max(log_scale, q * e.value);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    weight[i] = std::max(std::exp(q * g.edges[i].value - log_scale), kFloor);

  if (lazy > 0.0) {
    solve(lazy, max_iterations);
  } else {
    const int first_cap = std::min(max_iterations, 2000);
    try {
      solve(0.0, first_cap);
    } catch (const ConvergenceError&) {
      if (first_cap >= max_iterations) throw;
      // Nearly periodic: a heavy cycle of length p puts p eigenvalues close to
      // the circle |z| = rho. Rescale by the maximum cycle mean and a
      // potential (longest paths), so every weight is at most 1 (up to the
      // relaxation tolerance) and the
      // heaviest cycles have weight exactly 1 (rho' >= 1), then iterate
      // M' + I, which pulls the other eigenvalues inside.
      log_scale = q >= 0.0 ? q * max_mean_cycle(g) : q * min_mean_cycle(g);
      std::vector<double> h(n, 0.0);
      for (std::size_t round = 0; round < n; ++round) {
        bool changed = false;
        for (const auto& e : g.edges) {
          const double cand = h[e.from] + q * e.value - log_scale;
          if (cand > h[e.to] + 1e-12 * (1.0 + std::abs(h[e.to]))) {
            h[e.to] = cand;
            changed = true;
          }
        }
        if (!changed) break;
      }
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        weight[i] = std::max(std::exp(q * e.value - log_scale + h[e.from] - h[e.to]), kFloor);
      }
      solve(1.0, max_iterations);
    }
  }
  if (!(radius > 0.0)) throw ConvergenceError("transfer matrix has no cycle");
  out.log_radius = std::log(radius) + log_scale;

  // The slope is invariant under the diagonal rescaling.
  double num = 0.0, den = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    num += out.left[g.edges[e].from] * weight[e] * g.edges[e].value * out.right[g.edges[e].to];
  for (std::size_t s = 0; s < n; ++s) den += out.left[s] * out.right[s];
  out.slope = num / (radius * den);
  return out;
}

double min_mean_cycle(const CocycleGraph& g) { return karp_min(g, 1.0); }
double max_mean_cycle(const CocycleGraph& g) { return karp_min(g, -1.0); }

}  // namespace spectra
