#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectra/errors.hpp"
#include "spectra/legendre.hpp"
#include "spectra/parallel.hpp"
#include "spectra/pressure.hpp"

namespace spectra {
namespace {

// Closest admitted exponent to zero on the open side.
constexpr double kZeroGap = 1e-6;
constexpr double kRefineTolerance = 1e-8;
constexpr double kInvPhi = 0.6180339887498949;

struct Side {
  double lo, hi;
};

Side admitted_side(double amin, double amax, Restriction sign) {
  std::ostringstream os;
  if (sign == Restriction::kNegative) {
    if (!(amin < 0.0)) {
      os << "no measures of requested sign: negative exponents need alpha_min < 0, got " << amin;
      throw EmptyDomain(os.str());
    }
    const double hi = std::max(amin, std::min(amax, -kZeroGap));
    return {amin, hi};
  }
  if (sign == Restriction::kPositive) {
    if (!(amax > 0.0)) {
      os << "no measures of requested sign: positive exponents need alpha_max > 0, got " << amax;
      throw EmptyDomain(os.str());
    }
    const double lo = std::min(amax, std::max(amin, kZeroGap));
    return {lo, amax};
  }
  return {amin, amax};
}

std::shared_ptr<const PressureCurve> base_curve(const CenterCocycle& c) {
  return std::make_shared<const PressureCurve>(pressure_curve(c, linear_grid(-20.0, 20.0, 81)));
}

double sup_on_side(const PressureCurve& base, double lo, double hi, double q) {
  auto g = [&](double a) {
    auto h = lf_transform(base, a);
    return h ? *h + q * a : -std::numeric_limits<double>::infinity();
  };
  if (!(lo < hi)) return g(lo);
  double previous = std::numeric_limits<double>::quiet_NaN();
  double estimate = -std::numeric_limits<double>::infinity();
  for (std::size_t points = 33; points <= 4097; points = 2 * points - 1) {
    const auto grid = linear_grid(lo, hi, points);
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = g(grid[i]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    // Concave: golden-section between the neighbours of the grid argmax.
    double a = grid[arg == 0 ? 0 : arg - 1], b = grid[std::min(arg + 1, grid.size() - 1)];
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++it) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = g(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = g(x2);
      }
    }
    estimate = std::max({best, f1, f2});
    if (std::abs(estimate - previous) < kRefineTolerance) return estimate;
    previous = estimate;
  }
  return estimate;
}

}  // namespace

RestrictedPressure::RestrictedPressure(const CenterCocycle& c, Restriction sign)
    : full_(std::make_shared<const PressureFunction>(c)), sign_(sign) {
  const Side side = admitted_side(full_->alpha_min(), full_->alpha_max(), sign);
  lo_ = side.lo;
  hi_ = side.hi;
  base_ = base_curve(c);
}

double RestrictedPressure::operator()(double q) const {
  if (sign_ == Restriction::kNone) return (*full_)(q);
  return sup_on_side(*base_, lo_, hi_, q);
}

double pressure_restricted(const CenterCocycle& c, double q, Restriction sign) {
  return RestrictedPressure(c, sign)(q);
}

PressureCurve restricted_pressure_curve(const CenterCocycle& c, Restriction sign, std::vector<double> q_grid) {
  if (q_grid.empty()) throw InvalidArgument("empty q grid");
  if (sign == Restriction::kNone) return pressure_curve(c, std::move(q_grid));
  auto fn = std::make_shared<const RestrictedPressure>(c, sign);
  PressureCurve curve;
  curve.q_grid = std::move(q_grid);
  curve.values = parallel_map(curve.q_grid.size(), [&](std::size_t i) { return (*fn)(curve.q_grid[i]); });
  const std::size_t n = curve.q_grid.size();
  curve.slopes.assign(n, 0.0);
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? i : i + 1;
    curve.slopes[i] = (curve.values[b] - curve.values[a]) / (curve.q_grid[b] - curve.q_grid[a]);
  }
  curve.alpha_min = fn->alpha_lo();
  curve.alpha_max = fn->alpha_hi();
  curve.end_slope_min = curve.slopes.front();
  curve.end_slope_max = curve.slopes.back();
  curve.restriction = sign;
  curve.evaluate = [fn](double q) { return (*fn)(q); };
  return curve;
}

}  // namespace spectra
