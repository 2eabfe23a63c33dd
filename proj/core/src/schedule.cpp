#include "spectra/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectra/errors.hpp"
#include "spectra/skeleton.hpp"

namespace spectra {
namespace {

// The binary value of a double as an exact rational.
BigRational exact(double x) {
  if (x == 0.0) return BigRational(0);
  int e = 0;
  const double mant = std::frexp(x, &e);
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  BigRational r{BigInt(scaled)};
  const int shift = e - 53;
  if (shift >= 0)
    r *= BigRational(BigInt(1) << shift);
  else
    r /= BigRational(BigInt(1) << -shift);
  return r;
}

using LD = long double;

struct Names {
  static constexpr const char* gap_dominance = "gap_dominance";
  static constexpr const char* bridge_cost = "bridge_cost";
  static constexpr const char* block_fraction = "block_fraction";
  static constexpr const char* next_distortion = "next_distortion";
  static constexpr const char* next_overhead = "next_overhead";
  static constexpr const char* next_block_vs_time = "next_block_vs_time";
  static constexpr const char* time_growth = "time_growth";
  static constexpr const char* level_distortion = "level_distortion";
};

// Level k+1 quantities, extrapolated from level K at the top.
const ScheduleLevel& next_of(const Schedule& s, std::size_t k) { return s.level(std::min(k + 1, s.depth())); }

InequalityCheck gap_dominance(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const std::size_t lhs = std::max({L.ell_flat, L.b_sharp, L.T_sharp});
  return {Names::gap_dominance, k, static_cast<double>(lhs), static_cast<double>(L.n), lhs < L.n};
}

InequalityCheck bridge_cost(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const LD lhs = static_cast<LD>(L.m) * s.C_max / static_cast<LD>(L.n);
  const bool pass = static_cast<LD>(L.m) * s.C_max < static_cast<LD>(L.eps) * static_cast<LD>(L.n);
  return {Names::bridge_cost, k, static_cast<double>(lhs), L.eps, pass};
}

InequalityCheck block_fraction(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const std::size_t denom = L.n + L.ell_sharp + L.m;
  const bool pass = BigRational(BigInt(L.n)) >= (BigRational(1) - exact(L.eps)) * BigRational(BigInt(denom));
  return {Names::block_fraction, k, static_cast<double>(L.n) / static_cast<double>(denom), 1.0 - L.eps, pass};
}

InequalityCheck next_distortion(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const auto& M = next_of(s, k);
  const bool pass = static_cast<LD>(M.log_K) < static_cast<LD>(L.eps) * static_cast<LD>(L.n);
  return {Names::next_distortion, k, M.log_K / static_cast<double>(L.n), L.eps, pass};
}

InequalityCheck next_overhead(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const auto& M = next_of(s, k);
  const LD num = static_cast<LD>(M.log_K) + static_cast<LD>(M.m + M.ell_flat) * static_cast<LD>(s.C_max);
  const bool pass = num < static_cast<LD>(L.eps) * static_cast<LD>(L.n);
  return {Names::next_overhead, k, static_cast<double>(num / static_cast<LD>(L.n)), L.eps, pass};
}

InequalityCheck next_block_vs_time(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const auto& M = s.level(k + 1);
  const std::size_t num = M.n + M.ell_sharp;
  const bool pass = L.t > 0 && BigRational(BigInt(num)) < exact(L.eps) * BigRational(BigInt(L.t));
  return {Names::next_block_vs_time, k, static_cast<double>(num) / static_cast<double>(L.t), L.eps, pass};
}

InequalityCheck time_growth(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const auto& M = s.level(k + 1);
  const bool pass = static_cast<LD>(L.t) * static_cast<LD>(s.C_max) < static_cast<LD>(M.eps) * static_cast<LD>(M.t);
  return {Names::time_growth, k, static_cast<double>(L.t) / static_cast<double>(M.t), M.eps / s.C_max, pass};
}

InequalityCheck level_distortion(const Schedule& s, std::size_t k) {
  const auto& L = s.level(k);
  const bool pass = static_cast<LD>(L.log_K) < static_cast<LD>(L.eps) * static_cast<LD>(L.T);
  return {Names::level_distortion, k, L.log_K / static_cast<double>(L.T), L.eps, pass};
}

std::size_t strict_floor_plus_one(long double bound) {
  if (!(bound >= 0)) return 0;
  return static_cast<std::size_t>(std::floor(bound)) + 1;
}

std::string describe(const InequalityCheck& c) {
  std::ostringstream os;
  os << c.name << " fails at level " << c.level << " (" << c.lhs << " vs " << c.rhs << ")";
  return os.str();
}

}  // namespace

const std::vector<std::string>& schedule_condition_names() {
  static const std::vector<std::string> names{Names::gap_dominance,    Names::bridge_cost,
                                              Names::block_fraction,   Names::next_distortion,
                                              Names::next_overhead,    Names::next_block_vs_time,
                                              Names::time_growth,      Names::level_distortion};
  return names;
}

std::vector<InequalityCheck> check_schedule(const Schedule& s) {
  std::vector<InequalityCheck> out;
  for (std::size_t k = 1; k <= s.depth(); ++k) {
    out.push_back(gap_dominance(s, k));
    out.push_back(bridge_cost(s, k));
    out.push_back(block_fraction(s, k));
    out.push_back(next_distortion(s, k));
    out.push_back(next_overhead(s, k));
    if (k < s.depth()) {
      out.push_back(next_block_vs_time(s, k));
      out.push_back(time_growth(s, k));
    }
    out.push_back(level_distortion(s, k));
  }
  return out;
}

bool all_pass(const std::vector<InequalityCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.pass; });
}

Schedule build_schedule(const CenterCocycle& c, const std::vector<double>& eps, const SpectrumCurve& spectrum,
                        const ScheduleOptions& options) {
  if (eps.empty()) throw InvalidArgument("eps sequence is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) throw InvalidArgument("eps values must be positive and finite");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw InvalidArgument("eps sequence must be strictly decreasing");
  }
  if (options.sign == Restriction::kNone) throw InvalidArgument("schedule needs a negative or positive side");
  if (!(options.window_factor > 0.0)) throw InvalidArgument("window factor must be positive");
  const bool negative = options.sign == Restriction::kNegative;
  const auto h_frak = negative ? spectrum.h_minus : spectrum.h_plus;
  if (!h_frak)
    throw EmptyDomain(std::string("the spectrum does not reach zero from the ") + (negative ? "negative" : "positive") +
                      " side");

  Schedule s;
  s.sign = options.sign;
  s.h_frak = *h_frak;
  s.C_max = c.c_max();
  s.K0 = options.K0.value_or(default_K0(c));
  if (!(s.K0 >= 1.0)) throw InvalidArgument("K0 must be at least 1");
  const std::size_t ell_sharp = c.system().bridge_length();
  const std::size_t bridge = std::max(ell_sharp, options.bridge_override.value_or(0));
  const std::size_t d = static_cast<std::size_t>(c.depth());
  const std::size_t K = eps.size();
  s.levels.resize(K);

  for (std::size_t k = 1; k <= K; ++k) {
    ScheduleLevel& L = s.levels[k - 1];
    L.eps = eps[k - 1];
    // chi: admitted grid point nearest zero on the schedule's side.
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < spectrum.alpha_grid.size(); ++i) {
      const double a = spectrum.alpha_grid[i];
      if (negative ? !(a < 0.0) : !(a > 0.0)) continue;
      if (spectrum.values[i] < s.h_frak - L.eps) continue;
      if (!pick || std::abs(a) < std::abs(spectrum.alpha_grid[*pick])) pick = i;
    }
    if (!pick) throw InfeasibleSchedule("chi_selection", static_cast<int>(k), "no spectrum grid point on the requested side reaches h - eps at level " + std::to_string(k));
    L.chi = spectrum.alpha_grid[*pick];
    L.h = spectrum.values[*pick];
    L.eps_E = options.window_factor * L.eps;
    L.ell_sharp = ell_sharp;
    L.ell = ell_sharp;
    L.m = bridge;
    L.ell_flat = d - 1;
    L.log_K = std::log(s.K0) + static_cast<double>(L.ell) * (c.max_abs() + std::abs(L.chi)) +
              static_cast<double>(d - 1) * s.C_max;
    L.T_sharp = L.log_K > 0.0 ? static_cast<std::size_t>(std::ceil(L.log_K / L.eps)) : 0;

    // b#: the rate must clear h - eps from b# on. Rates oscillate, so the
    // scan runs until the passing stretch is at least as long as the prefix
    // before it (and at least 64 lengths).
    LatticeConstraint lc;
    const double log_K0 = std::log(s.K0);
    lc.prefix_ok = [&](std::size_t l, double sum) { return within_window(sum, l, L.chi, log_K0, L.eps_E); };
    std::size_t last_fail = 0;
    std::optional<std::size_t> found;
    for_each_prefix_count(
        c, lc, options.max_block_length,
        [&](std::size_t m, const BigInt& count) {
          const bool clears = count > 0 && log_big(count) / static_cast<double>(m) >= L.h - L.eps;
          if (!clears) {
            last_fail = m;
            return true;
          }
          if (m >= std::max<std::size_t>(64, 2 * (last_fail + 1))) {
            found = last_fail + 1;
            return false;
          }
          return true;
        },
        options.state_budget);
    if (!found)
      throw InfeasibleSchedule(Names::gap_dominance, static_cast<int>(k),
                               "skeleton rate does not settle above h - eps within block length " +
                                   std::to_string(options.max_block_length) + " at level " + std::to_string(k));
    L.b_sharp = *found;
  }

  // n_k: smallest block length meeting every single-level condition.
  for (std::size_t k = 1; k <= K; ++k) {
    ScheduleLevel& L = s.levels[k - 1];
    const ScheduleLevel& M = next_of(s, k);
    const LD e = L.eps;
    std::size_t n = std::max<std::size_t>(1, std::max({L.ell_flat, L.b_sharp, L.T_sharp}) + 1);
    n = std::max(n, strict_floor_plus_one(static_cast<LD>(L.m) * s.C_max / e));
    n = std::max(n, strict_floor_plus_one(static_cast<LD>(M.log_K) / e));
    n = std::max(n, strict_floor_plus_one((static_cast<LD>(M.log_K) + static_cast<LD>(M.m + M.ell_flat) * s.C_max) / e));
    for (;; ++n) {
      if (n > options.max_block_length)
        throw InfeasibleSchedule(Names::next_overhead, static_cast<int>(k),
                                 "block length exceeds " + std::to_string(options.max_block_length) + " at level " +
                                     std::to_string(k));
      L.n = n;
      if (gap_dominance(s, k).pass && bridge_cost(s, k).pass && block_fraction(s, k).pass &&
          next_distortion(s, k).pass && next_overhead(s, k).pass)
        break;
    }
  }

  // N_k in level order; t_{k-1} is known, n_{k+1} is known.
  for (std::size_t k = 1; k <= K; ++k) {
    ScheduleLevel& L = s.levels[k - 1];
    const std::uint64_t t_prev = s.t(k - 1);
    const LD unit = static_cast<LD>(L.n + L.ell);
    auto set_N = [&](std::uint64_t N) {
      L.N = N;
      L.T = N * (L.n + L.ell);
      L.t = t_prev + L.T + L.m;
    };
    LD need_T = static_cast<LD>(L.log_K) / static_cast<LD>(L.eps);
    if (k > 1) need_T = std::max(need_T, static_cast<LD>(t_prev) * s.C_max / static_cast<LD>(L.eps) - t_prev - L.m);
    if (k < K) {
      const ScheduleLevel& M = s.levels[k];
      need_T = std::max(need_T, static_cast<LD>(M.n + M.ell_sharp) / static_cast<LD>(L.eps) - t_prev - L.m);
    }
    std::uint64_t N = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::max<LD>(0, std::floor(need_T / unit))));
    if (N > 1) --N;
    for (;; ++N) {
      if (static_cast<LD>(N) * unit + t_prev > static_cast<LD>(options.max_total_length))
        throw InfeasibleSchedule(Names::time_growth, static_cast<int>(k),
                                 "level " + std::to_string(k) + " would exceed total length " +
                                     std::to_string(options.max_total_length));
      set_N(N);
      bool ok = level_distortion(s, k).pass;
      if (ok && k > 1) ok = time_growth(s, k - 1).pass;
      if (ok && k < K) ok = next_block_vs_time(s, k).pass;
      if (ok) break;
    }
  }

  for (const auto& check : check_schedule(s))
    if (!check.pass) throw InfeasibleSchedule(check.name, static_cast<int>(check.level), describe(check));
  return s;
}

}  // namespace spectra
