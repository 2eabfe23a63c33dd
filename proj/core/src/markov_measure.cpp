#include "spectra/markov_measure.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "spectra/errors.hpp"

namespace spectra {

MarkovMeasure::MarkovMeasure(const SymbolicSystem& system, Matrix stochastic) : p_(std::move(stochastic)) {
  const auto k = static_cast<std::size_t>(system.alphabet_size());
  if (p_.size() != k) throw InvalidArgument("stochastic matrix must be k x k");
  for (std::size_t i = 0; i < k; ++i) {
    if (p_[i].size() != k) throw InvalidArgument("stochastic matrix must be k x k");
    double row = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double x = p_[i][j];
      if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("stochastic entries must be finite and >= 0");
      if (x > 0.0 && !system.allowed(static_cast<Symbol>(i), static_cast<Symbol>(j)))
        throw InvalidArgument("stochastic matrix charges forbidden transition " + std::to_string(i) + "->" +
                              std::to_string(j));
      row += x;
    }
    if (std::abs(row - 1.0) > 1e-12) throw InvalidArgument("row " + std::to_string(i) + " does not sum to 1");
  }
  // [P^T - I; 1^T] pi = [0; 1]
  const auto n = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd a(n + 1, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = p_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] - (i == j ? 1.0 : 0.0);
  a.row(n).setOnes();
  b(n) = 1.0;
  const Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);
  pi_.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) pi_[i] = std::max(0.0, pi(static_cast<Eigen::Index>(i)));
  residual_ = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += pi_[i] * p_[i][j];
    residual_ = std::max(residual_, std::abs(acc - pi_[j]));
  }
  double total = 0.0;
  for (double x : pi_) total += x;
  residual_ = std::max(residual_, std::abs(total - 1.0));
  if (!(residual_ < 1e-12)) throw ConvergenceError("stationary vector residual " + std::to_string(residual_));
}

MarkovMeasure MarkovMeasure::bernoulli(const SymbolicSystem& system, const std::vector<double>& p) {
  if (!system.is_full_shift()) throw InvalidArgument("Bernoulli measures need a full shift");
  if (p.size() != static_cast<std::size_t>(system.alphabet_size()))
    throw InvalidArgument("Bernoulli weights must have one entry per symbol");
  return MarkovMeasure(system, Matrix(p.size(), p));
}

EntropyExponent measure_entropy_and_exponent(const MarkovMeasure& m, const CenterCocycle& c) {
  const auto& p = m.stochastic();
  const auto& pi = m.stationary();
  const std::size_t k = p.size();
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (p[i][j] > 0.0) h -= pi[i] * p[i][j] * std::log(p[i][j]);
  double chi = 0.0;
  const auto& windows = c.windows();
  const auto& values = c.window_values();
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const Word& word = windows[w];
    double mass = pi[word[0]];
    for (std::size_t i = 1; i < word.size() && mass > 0.0; ++i) mass *= p[word[i - 1]][word[i]];
    chi += mass * values[w];
  }
  return {h, chi};
}

}  // namespace spectra
