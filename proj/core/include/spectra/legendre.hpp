#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectra/cocycle.hpp"
#include "spectra/enumerate.hpp"
#include "spectra/lattice_dp.hpp"
#include "spectra/pressure.hpp"

namespace spectra {

/// Sampled alpha -> H(alpha) on the part of a grid inside the domain.
struct SpectrumCurve {
  std::vector<double> alpha_grid;
  std::vector<double> values;
  /// Minimizing q for each point (H'(alpha) = -q).
  std::vector<double> argmin_q;
  double domain_min = 0.0;
  double domain_max = 0.0;
  /// H just below and just above zero, when the domain reaches there.
  std::optional<double> h_minus;
  std::optional<double> h_plus;
};

/// Slack on the domain test alpha in [alpha_min, alpha_max].
inline constexpr double kDomainTolerance = 1e-9;

struct LegendrePoint {
  double value;
  double argmin_q;
};

/// inf_q P(q) - q*alpha: grid minimum followed by golden-section refinement
/// around it (the bracket is widened past the grid ends when the minimum
/// sits there). Undefined outside [alpha_min, alpha_max].
std::optional<LegendrePoint> lf_point(const PressureCurve& p, double alpha);

inline std::optional<double> lf_transform(const PressureCurve& p, double alpha) {
  auto r = lf_point(p, alpha);
  if (!r) return std::nullopt;
  return r->value;
}

/// lf_transform at every grid point (parallel, ordered).
std::vector<std::optional<LegendrePoint>> lf_sweep(const PressureCurve& p, const std::vector<double>& grid);

/// Throws EmptyDomain when no grid point lies in the domain.
SpectrumCurve spectrum(const PressureCurve& p, const std::vector<double>& grid);

/// Grid of n points spanning the domain of p.
std::vector<double> domain_grid(const PressureCurve& p, std::size_t n);

/// (1/n) log #{admissible n-words w : |S_n(w)/n - alpha| <= window}, counted
/// exactly by the lattice DP; -inf when no word qualifies. When the DP state
/// budget is exhausted, falls back to enumeration if k^n fits `budget`, and
/// otherwise throws BudgetExceeded.
double spectrum_brute_force(const CenterCocycle& c, double alpha, double window, std::size_t n,
                            std::uint64_t budget = kDefaultEnumerationBudget,
                            std::size_t state_budget = kDefaultStateBudget);

// -- property checks --------------------------------------------------------

struct CheckResult {
  bool pass = false;
  /// Worst observed quantity (meaning depends on the check).
  double worst = 0.0;
  std::string detail;
};

/// Each interior value is at least the chord of its neighbours minus tol.
CheckResult check_concavity(const SpectrumCurve& s, double tol = 1e-9);

/// Defined values form one contiguous run along the sweep.
CheckResult check_domain_interval(const std::vector<std::optional<LegendrePoint>>& sweep);

/// max over the curve and the maximizer alpha* = P'(0) equals P(0).
CheckResult check_max_equals_p0(const SpectrumCurve& s, const PressureCurve& p, double tol = 1e-8);

/// Values are non-negative on the domain interior.
CheckResult check_nonnegative(const SpectrumCurve& s, double tol = 1e-12);

/// Interval [lo, hi] that the counting rate at (alpha, window, n) must fall
/// in: extremes of H over the window widened by the boundary defect, padded
/// by the method-of-types term edges * log(n + 1) / n.
struct BruteForceBracket {
  double lo;
  double hi;
};
BruteForceBracket brute_force_bracket(const PressureCurve& p, const CenterCocycle& c, double alpha, double window,
                                      std::size_t n);

/// Compares the brute-force rate against the bracket at each alpha.
CheckResult check_brute_force(const PressureCurve& p, const CenterCocycle& c, const std::vector<double>& alphas,
                              double window, std::size_t n);

/// One-sided limits of H at 0: values at -delta and +delta, and the
/// tolerance 2 * delta * max |H'| within which they should agree when the
/// model is symmetric.
struct OneSidedLimits {
  std::optional<double> minus;
  std::optional<double> plus;
  double tolerance = 0.0;
};
OneSidedLimits one_sided_limits(const PressureCurve& p, double delta = 1e-6);

}  // namespace spectra
