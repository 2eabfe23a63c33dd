#include "spectra/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"

namespace spectra {
namespace {

constexpr double kQCap = 1e5;
constexpr double kInvPhi = 0.6180339887498949;

struct Minimum {
  double q;
  double value;
};

template <class F>
Minimum golden_section(F&& f, double lo, double hi, Minimum best) {
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-11 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  if (f1 < best.value) best = {x1, f1};
  if (f2 < best.value) best = {x2, f2};
  return best;
}

// Walks outward from the grid end until f turns up; returns the bracket or
// nullopt when f flattens (the infimum is approached at infinity).
template <class F>
std::optional<std::pair<double, double>> extend(F&& f, double inner, double end, double step, Minimum& best) {
  const double dir = end > inner ? 1.0 : -1.0;
  double prev = inner, mid = end, fmid = best.value;
  step = std::max(std::abs(step), 1.0);
  for (int it = 0; it < 64; ++it) {
    const double next = mid + dir * step;
    if (std::abs(next) > kQCap) return std::nullopt;
    const double fn = f(next);
    if (fn >= fmid) return std::make_pair(std::min(prev, next), std::max(prev, next));
    const bool flat = (fmid - fn) <= 1e-15 * (1.0 + std::abs(fmid));
    best = {next, fn};
    if (flat) return std::nullopt;
    prev = mid;
    mid = next;
    fmid = fn;
    step *= 2.0;
  }
  return std::nullopt;
}

}  // namespace

std::optional<LegendrePoint> lf_point(const PressureCurve& p, double alpha) {
  if (alpha < p.alpha_min - kDomainTolerance || alpha > p.alpha_max + kDomainTolerance) return std::nullopt;
  if (p.q_grid.empty()) throw InvalidArgument("pressure curve has an empty grid");
  const double a = std::clamp(alpha, p.alpha_min, p.alpha_max);
  auto f = [&](double q) { return p.evaluate(q) - q * a; };
  const std::size_t n = p.q_grid.size();
  std::size_t arg = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (p.values[i] - p.q_grid[i] * a < p.values[arg] - p.q_grid[arg] * a) arg = i;
  Minimum best{p.q_grid[arg], p.values[arg] - p.q_grid[arg] * a};

  std::optional<std::pair<double, double>> bracket;
  if (arg > 0 && arg + 1 < n) {
    bracket = std::make_pair(p.q_grid[arg - 1], p.q_grid[arg + 1]);
  } else if (arg + 1 == n && (n == 1 || arg > 0)) {
    const double inner = n > 1 ? p.q_grid[n - 2] : p.q_grid[0] - 1.0;
    bracket = extend(f, inner, p.q_grid[n - 1], p.q_grid[n - 1] - inner, best);
    if (n == 1 && bracket) bracket->first = std::min(bracket->first, p.q_grid[0] - 1.0);
  } else {
    const double inner = p.q_grid[1];
    bracket = extend(f, inner, p.q_grid[0], inner - p.q_grid[0], best);
  }
  if (bracket) best = golden_section(f, bracket->first, bracket->second, best);
  return LegendrePoint{best.value, best.q};
}

std::vector<std::optional<LegendrePoint>> lf_sweep(const PressureCurve& p, const std::vector<double>& grid) {
  return parallel_map(grid.size(), [&](std::size_t i) { return lf_point(p, grid[i]); });
}

SpectrumCurve spectrum(const PressureCurve& p, const std::vector<double>& grid) {
  const auto sweep = lf_sweep(p, grid);
  SpectrumCurve s;
  s.domain_min = p.alpha_min;
  s.domain_max = p.alpha_max;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (sweep[i]) {
      s.alpha_grid.push_back(grid[i]);
      s.values.push_back(sweep[i]->value);
      s.argmin_q.push_back(sweep[i]->argmin_q);
    }
  const OneSidedLimits limits = one_sided_limits(p);
  s.h_minus = limits.minus;
  s.h_plus = limits.plus;
  if (s.alpha_grid.empty()) {
    std::ostringstream os;
    os << "alpha grid lies entirely outside the domain [" << p.alpha_min << ", " << p.alpha_max << "]";
    throw EmptyDomain(os.str());
  }
  return s;
}

std::vector<double> domain_grid(const PressureCurve& p, std::size_t n) {
  if (!(p.alpha_min < p.alpha_max) || n == 1) return {p.alpha_min};
  return linear_grid(p.alpha_min, p.alpha_max, n);
}

double spectrum_brute_force(const CenterCocycle& c, double alpha, double window, std::size_t n, std::uint64_t budget,
                            std::size_t state_budget) {
  if (n == 0) throw InvalidArgument("brute-force length must be at least 1");
  if (!(window >= 0.0)) throw InvalidArgument("window must be non-negative");
  const double nn = static_cast<double>(n);
  const double slack = 1e-9;
  auto inside = [&](double s) { return std::abs(s - nn * alpha) <= nn * window + slack; };
  BigInt count = 0;
  try {
    LatticeConstraint lc;
    lc.length = n;
    lc.final_ok = inside;
    count = count_lattice_words(c, lc, state_budget);
  } catch (const BudgetExceeded&) {
    WordStream stream(c.system(), n, budget);  // throws BudgetExceeded past the enumeration budget
    Word w;
    while (stream.next(w))
      if (w.size() >= static_cast<std::size_t>(c.depth()) && inside(birkhoff_sum(w, c))) ++count;
  }
  if (count == 0) return -std::numeric_limits<double>::infinity();
  return log_big(count) / nn;
}

CheckResult check_concavity(const SpectrumCurve& s, double tol) {
  CheckResult r;
  r.pass = true;
  r.worst = 0.0;
  std::size_t where = 0;
  for (std::size_t i = 1; i + 1 < s.alpha_grid.size(); ++i) {
    const double a0 = s.alpha_grid[i - 1], a1 = s.alpha_grid[i], a2 = s.alpha_grid[i + 1];
    const double t = (a1 - a0) / (a2 - a0);
    const double chord = (1.0 - t) * s.values[i - 1] + t * s.values[i + 1];
    const double deficit = chord - s.values[i];
    if (deficit > r.worst) {
      r.worst = deficit;
      where = i;
    }
  }
  r.pass = r.worst <= tol;
  std::ostringstream os;
  os << "max chord excess " << r.worst;
  if (!r.pass) os << " at alpha=" << s.alpha_grid[where];
  r.detail = os.str();
  return r;
}

CheckResult check_domain_interval(const std::vector<std::optional<LegendrePoint>>& sweep) {
  CheckResult r;
  int runs = 0;
  bool prev = false;
  for (const auto& x : sweep) {
    if (x.has_value() && !prev) ++runs;
    prev = x.has_value();
  }
  r.pass = runs == 1;
  r.worst = runs;
  r.detail = std::to_string(runs) + " defined run(s)";
  return r;
}

CheckResult check_max_equals_p0(const SpectrumCurve& s, const PressureCurve& p, double tol) {
  const double p0 = p.evaluate(0.0);
  double best = -std::numeric_limits<double>::infinity();
  for (double v : s.values) best = std::max(best, v);
  constexpr double h = 1e-5;
  const double alpha_star = (p.evaluate(h) - p.evaluate(-h)) / (2.0 * h);
  if (auto at = lf_transform(p, alpha_star)) best = std::max(best, *at);
  CheckResult r;
  r.worst = std::abs(best - p0);
  r.pass = r.worst <= tol;
  std::ostringstream os;
  os << "max H = " << best << ", P(0) = " << p0 << ", maximizer alpha* = " << alpha_star;
  r.detail = os.str();
  return r;
}

CheckResult check_nonnegative(const SpectrumCurve& s, double tol) {
  CheckResult r;
  r.worst = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double a = s.alpha_grid[i];
    if (a <= s.domain_min || a >= s.domain_max) continue;
    r.worst = std::min(r.worst, s.values[i]);
  }
  r.pass = r.worst >= -tol;
  r.detail = "min interior value " + std::to_string(r.worst);
  return r;
}

BruteForceBracket brute_force_bracket(const PressureCurve& p, const CenterCocycle& c, double alpha, double window,
                                      std::size_t n) {
  const double nn = static_cast<double>(n);
  const double spacing = (p.alpha_max - p.alpha_min) / nn;
  const double boundary = static_cast<double>(c.depth() - 1) * c.max_abs() / nn;
  const auto g = cocycle_graph(c);
  const bool bernoulli = c.depth() == 1 && c.system().is_full_shift();
  const double types = bernoulli ? static_cast<double>(c.alphabet_size() - 1) : static_cast<double>(g.edges.size());
  const double pad = types * std::log(nn + 1.0) / nn + 1e-9;
  auto H = [&](double a) {
    auto v = lf_transform(p, std::clamp(a, p.alpha_min, p.alpha_max));
    return v ? *v : 0.0;
  };
  // Upper: the concave maximum over the widened window.
  const double wlo = std::max(p.alpha_min, alpha - window - boundary);
  const double whi = std::min(p.alpha_max, alpha + window + boundary);
  BruteForceBracket b{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  if (wlo > whi) return b;
  constexpr double h = 1e-5;
  const double alpha_star = (p.evaluate(h) - p.evaluate(-h)) / (2.0 * h);
  b.hi = H(std::clamp(alpha_star, wlo, whi)) + pad;
  // Lower: the concave minimum over the shrunk window (endpoint values).
  const double shrink = spacing + boundary;
  const double slo = std::max(p.alpha_min, alpha - window + shrink);
  const double shi = std::min(p.alpha_max, alpha + window - shrink);
  if (slo <= shi) b.lo = std::min(H(slo), H(shi)) - pad;
  return b;
}

CheckResult check_brute_force(const PressureCurve& p, const CenterCocycle& c, const std::vector<double>& alphas,
                              double window, std::size_t n) {
  CheckResult r;
  r.pass = true;
  r.worst = 0.0;
  std::ostringstream os;
  const auto rates = parallel_map(alphas.size(), [&](std::size_t i) { return spectrum_brute_force(c, alphas[i], window, n); });
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto b = brute_force_bracket(p, c, alphas[i], window, n);
    const double rate = rates[i];
    const bool ok = (rate >= b.lo || b.lo == -std::numeric_limits<double>::infinity()) && rate <= b.hi;
    const double excess = std::max(b.lo - rate, rate - b.hi);
    if (std::isfinite(excess)) r.worst = std::max(r.worst, excess);
    if (!ok) {
      r.pass = false;
      os << "alpha=" << alphas[i] << " rate " << rate << " outside [" << b.lo << ", " << b.hi << "]; ";
    }
  }
  r.detail = r.pass ? "all rates inside their brackets" : os.str();
  return r;
}

OneSidedLimits one_sided_limits(const PressureCurve& p, double delta) {
  OneSidedLimits out;
  double slope = 0.0;
  if (auto m = lf_point(p, -delta)) {
    out.minus = m->value;
    slope = std::max(slope, std::abs(m->argmin_q));
  }
  if (auto m = lf_point(p, delta)) {
    out.plus = m->value;
    slope = std::max(slope, std::abs(m->argmin_q));
  }
  out.tolerance = 2.0 * delta * slope;
  return out;
}

}  // namespace spectra
