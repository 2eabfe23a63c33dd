#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "spectra/cocycle.hpp"
#include "spectra/transfer.hpp"

namespace spectra {

/// Which ergodic measures the variational supremum ranges over.
enum class Restriction { kNone, kNegative, kPositive };

const char* to_string(Restriction r);

/// P(q) = log spectral radius of the weighted transfer matrix of q*phi.
/// Holds the transfer graph so repeated evaluations are cheap.
class PressureFunction {
 public:
  explicit PressureFunction(const CenterCocycle& c);

  double operator()(double q) const { return perron(graph_, q).log_radius; }
  /// P(q) and P'(q) in one solve.
  PerronData evaluate(double q) const { return perron(graph_, q); }

  /// Exact asymptotic slopes: extreme mean cycle values.
  double alpha_min() const noexcept { return alpha_min_; }
  double alpha_max() const noexcept { return alpha_max_; }
  /// Lipschitz constant of P (max |phi|).
  double lipschitz() const noexcept { return lipschitz_; }
  const CocycleGraph& graph() const noexcept { return graph_; }

 private:
  CocycleGraph graph_;
  double alpha_min_ = 0.0, alpha_max_ = 0.0, lipschitz_ = 0.0;
};

double pressure_full(const CenterCocycle& c, double q);

/// log spectral radius of the 0/1 transition matrix.
double topological_entropy(const SymbolicSystem& sys);

/// A sampled pressure function together with an evaluator used for
/// refinement off the grid.
struct PressureCurve {
  std::vector<double> q_grid;
  std::vector<double> values;
  std::vector<double> slopes;
  /// Domain of the conjugate: [alpha_min, alpha_max].
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  /// Slopes measured at q = -|end| and q = +|end| (at least 50).
  double end_slope_min = 0.0;
  double end_slope_max = 0.0;
  Restriction restriction = Restriction::kNone;
  std::function<double(double)> evaluate;
};

/// n equally spaced points on [a, b]; n >= 2, a < b (n == 1 gives {a}).
std::vector<double> linear_grid(double a, double b, std::size_t n);

PressureCurve pressure_curve(const CenterCocycle& c, std::vector<double> q_grid);

/// Sign-restricted pressure sup over measures with exponent of the given
/// strict sign of h + q*chi, through the entropy spectrum. Throws EmptyDomain
/// when no measure has that sign.
double pressure_restricted(const CenterCocycle& c, double q, Restriction sign);

/// Reusable evaluator for many q values on one cocycle.
class RestrictedPressure {
 public:
  RestrictedPressure(const CenterCocycle& c, Restriction sign);
  double operator()(double q) const;
  /// Closed interval of exponents admitted on the restricted side.
  double alpha_lo() const noexcept { return lo_; }
  double alpha_hi() const noexcept { return hi_; }
  Restriction sign() const noexcept { return sign_; }

 private:
  std::shared_ptr<const PressureFunction> full_;
  std::shared_ptr<const PressureCurve> base_;
  Restriction sign_;
  double lo_ = 0.0, hi_ = 0.0;
};

PressureCurve restricted_pressure_curve(const CenterCocycle& c, Restriction sign, std::vector<double> q_grid);

/// Pressure of q*phi on the subshift of words avoiding `pattern` (product of
/// the cocycle graph with the pattern's KMP automaton). Returns -inf when the
/// subshift is empty or has zero entropy without cycles.
double pressure_avoiding(const CenterCocycle& c, double q, const Word& pattern);

}  // namespace spectra
