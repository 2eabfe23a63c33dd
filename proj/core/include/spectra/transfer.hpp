#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spectra/cocycle.hpp"

namespace spectra {

/// Weighted graph whose closed paths are the admissible bi-infinite words:
/// vertices are admissible (d-1)-words (symbols when d <= 2), edges are
/// admissible d-words (2-words when d = 1) carrying the cocycle value.
struct CocycleGraph {
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    double value;
    Symbol symbol;  // the symbol appended along this edge
  };
  std::size_t states = 0;
  std::vector<Edge> edges;  // grouped by `from`
  std::vector<std::size_t> first_edge;  // size states + 1
};

CocycleGraph cocycle_graph(const CenterCocycle& c);

/// Perron data of the matrix M_q with entries e^{q*value} along the edges.
struct PerronData {
  double log_radius = 0.0;
  /// d/dq log radius, from the left and right Perron vectors.
  double slope = 0.0;
  std::vector<double> right;
  std::vector<double> left;
  int iterations = 0;
};

inline constexpr double kPerronTolerance = 1e-12;
inline constexpr int kPerronMaxIterations = 100000;

/// Power iteration stopped by the Collatz-Wielandt bracket
/// max_i (Mv)_i / v_i <= (1 + tol) * min_i (Mv)_i / v_i.
/// Throws ConvergenceError after `max_iterations`. A positive `lazy` iterates
/// M + lazy * I (relative to the largest weight) instead, which converges on
/// irreducible but periodic graphs. With lazy = 0 an iteration that has not
/// settled after 2000 sweeps restarts on a diagonally rescaled matrix whose
/// heaviest cycles have weight 1, shifted by the identity (nearly periodic
/// weightings at large |q|).
PerronData perron(const CocycleGraph& g, double q, double tol = kPerronTolerance,
                  int max_iterations = kPerronMaxIterations, double lazy = 0.0);

/// Extreme mean cycle values (Karp), i.e. the limits of d/dq log radius as
/// q -> -inf and q -> +inf.
double min_mean_cycle(const CocycleGraph& g);
double max_mean_cycle(const CocycleGraph& g);

}  // namespace spectra
