#pragma once

#include <vector>

#include "spectra/cocycle.hpp"

namespace spectra {

/// Stationary first-order Markov chain on the symbols of a system.
class MarkovMeasure {
 public:
  using Matrix = std::vector<std::vector<double>>;

  /// Rows must sum to 1 (within 1e-12) and vanish on forbidden transitions.
  /// The stationary vector is solved for and checked to residual < 1e-12.
  MarkovMeasure(const SymbolicSystem& system, Matrix stochastic);

  /// Bernoulli(p) on a full shift.
  static MarkovMeasure bernoulli(const SymbolicSystem& system, const std::vector<double>& p);

  const Matrix& stochastic() const noexcept { return p_; }
  const std::vector<double>& stationary() const noexcept { return pi_; }
  /// max |pi P - pi|.
  double residual() const noexcept { return residual_; }

 private:
  Matrix p_;
  std::vector<double> pi_;
  double residual_ = 0.0;
};

struct EntropyExponent {
  double entropy;
  double exponent;
};

/// Entropy rate -sum pi_i p_ij log p_ij and exponent sum over d-words of
/// pi(w_0) p(w_0 w_1)...p(w_{d-2} w_{d-1}) phi(w).
EntropyExponent measure_entropy_and_exponent(const MarkovMeasure& m, const CenterCocycle& c);

}  // namespace spectra
