#include "spectra/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

constexpr double kEdge = 1e-12;

struct Tilted {
  double log_z;
  double mean;
};

Tilted tilt(const std::vector<double>& phi, double q) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : phi) top = std::max(top, q * v);
  double z = 0.0, m = 0.0;
  for (double v : phi) {
    const double w = std::exp(q * v - top);
    z += w;
    m += w * v;
  }
  return {top + std::log(z), m / z};
}

}  // namespace

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double bernoulli_pressure(const std::vector<double>& phi, double q) {
  if (phi.empty()) throw InvalidArgument("empty potential");
  return tilt(phi, q).log_z;
}

std::optional<double> bernoulli_spectrum(const std::vector<double>& phi, double alpha) {
  if (phi.size() < 2) throw InvalidArgument("need at least two symbols");
  const auto [lo_it, hi_it] = std::minmax_element(phi.begin(), phi.end());
  const double lo = *lo_it, hi = *hi_it;
  if (alpha < lo - kEdge || alpha > hi + kEdge) return std::nullopt;
  auto multiplicity = [&](double target) {
    return static_cast<double>(std::count_if(phi.begin(), phi.end(), [&](double v) { return std::abs(v - target) <= kEdge; }));
  };
  if (hi - lo <= kEdge) return std::log(static_cast<double>(phi.size()));
  if (std::abs(alpha - lo) <= kEdge) return std::log(multiplicity(lo));
  if (std::abs(alpha - hi) <= kEdge) return std::log(multiplicity(hi));
  if (phi.size() == 2) {
    const double p = (phi[1] - alpha) / (phi[1] - phi[0]);
    return binary_entropy(p);
  }
  double a = -1.0, b = 1.0;
  while (tilt(phi, a).mean > alpha) a *= 2.0;
  while (tilt(phi, b).mean < alpha) b *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    (tilt(phi, m).mean < alpha ? a : b) = m;
  }
  const double q = 0.5 * (a + b);
  return tilt(phi, q).log_z - q * alpha;
}

}  // namespace spectra
