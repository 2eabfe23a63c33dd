#include <gtest/gtest.h>

#include <cmath>

#include "spectra/closed_form.hpp"
#include "spectra/enumerate.hpp"
#include "spectra/errors.hpp"
#include "spectra/legendre.hpp"
#include "support/models.hpp"

using namespace spectra;
using spectra::testing::kGolden;
using spectra::testing::kLog2;

namespace {

const spectra::testing::SpectrumFixture& reference() {
  static const auto f = spectra::testing::spectrum_of(spectra::testing::reference_model());
  return f;
}

}  // namespace

TEST(ClosedForm, BinaryEntropyAndBernoulli) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), kLog2, 1e-15);
  const std::vector<double> phi = {std::log(0.25), kLog2};
  EXPECT_NEAR(bernoulli_pressure(phi, 1.0), std::log(2.25), 1e-15);
  EXPECT_NEAR(*bernoulli_spectrum(phi, 0.0), spectra::testing::reference_h0(), 1e-14);
  EXPECT_FALSE(bernoulli_spectrum(phi, 1.0).has_value());
  // Three symbols: the maximum is log 3 at the mean.
  EXPECT_NEAR(*bernoulli_spectrum({-1.0, 0.0, 2.0}, 1.0 / 3.0), std::log(3.0), 1e-9);
}

TEST(Legendre, MatchesClosedForm) {
  const auto& s = reference().curve;
  ASSERT_EQ(s.alpha_grid.size(), 101u);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.alpha_grid.size(); ++i)
    worst = std::max(worst, std::abs(s.values[i] - *bernoulli_spectrum({std::log(0.25), kLog2}, s.alpha_grid[i])));
  EXPECT_LE(worst, 1e-4);
}

TEST(Legendre, ThreeSymbolClosedForm) {
  const std::vector<double> phi = {-1.0, 0.0, 2.0};
  const auto c = CenterCocycle::locally_constant(SymbolicSystem::full_shift(3), phi);
  const auto f = spectra::testing::spectrum_of(c, 41);
  for (std::size_t i = 1; i + 1 < f.curve.alpha_grid.size(); ++i)
    EXPECT_NEAR(f.curve.values[i], *bernoulli_spectrum(phi, f.curve.alpha_grid[i]), 1e-4) << f.curve.alpha_grid[i];
}

TEST(Legendre, StructuralChecks) {
  const auto& f = reference();
  EXPECT_TRUE(check_concavity(f.curve).pass);
  EXPECT_TRUE(check_max_equals_p0(f.curve, f.pressure).pass);
  EXPECT_TRUE(check_nonnegative(f.curve).pass);
  const double w = f.curve.domain_max - f.curve.domain_min;
  const auto sweep = lf_sweep(f.pressure, linear_grid(f.curve.domain_min - 0.2 * w, f.curve.domain_max + 0.2 * w, 141));
  EXPECT_TRUE(check_domain_interval(sweep).pass);
  EXPECT_FALSE(sweep.front().has_value());
  EXPECT_FALSE(sweep.back().has_value());
}

TEST(Legendre, DomainChecksCatchDefects) {
  std::vector<std::optional<LegendrePoint>> sweep = {std::nullopt, LegendrePoint{0.1, 0}, std::nullopt,
                                                     LegendrePoint{0.2, 0}};
  EXPECT_FALSE(check_domain_interval(sweep).pass);
  SpectrumCurve bent;
  bent.alpha_grid = {0.0, 1.0, 2.0};
  bent.values = {1.0, 0.0, 1.0};
  EXPECT_FALSE(check_concavity(bent).pass);
}

TEST(Legendre, UndefinedOutsideDomain) {
  const auto& p = reference().pressure;
  EXPECT_FALSE(lf_transform(p, kLog2 + 0.01).has_value());
  EXPECT_FALSE(lf_transform(p, std::log(0.25) - 0.01).has_value());
  EXPECT_NEAR(*lf_transform(p, kLog2), 0.0, 1e-6);
  EXPECT_THROW(spectrum(p, {5.0, 6.0}), EmptyDomain);
  const auto g = domain_grid(p, 11);
  EXPECT_NEAR(g.front(), std::log(0.25), 1e-12);
  EXPECT_NEAR(g.back(), kLog2, 1e-12);
}

TEST(Legendre, GoldenMeanMaximum) {
  const auto f = spectra::testing::spectrum_of(spectra::testing::golden_model());
  EXPECT_TRUE(check_max_equals_p0(f.curve, f.pressure).pass);
  double top = 0.0;
  for (double v : f.curve.values) top = std::max(top, v);
  EXPECT_LE(top, std::log(kGolden) + 1e-9);
  EXPECT_GE(top, std::log(kGolden) - 1e-3);
  EXPECT_TRUE(check_concavity(f.curve).pass);
}

TEST(Legendre, OneSidedLimitsOfSymmetricModel) {
  const auto p = pressure_curve(spectra::testing::symmetric_model(), linear_grid(-20.0, 20.0, 401));
  const auto lim = one_sided_limits(p);
  ASSERT_TRUE(lim.minus && lim.plus);
  EXPECT_NEAR(*lim.minus, *lim.plus, lim.tolerance + 1e-9);
  EXPECT_NEAR(*lim.minus, kLog2, 1e-6);
}

TEST(BruteForce, DpMatchesEnumeration) {
  const auto c = spectra::testing::golden_model();
  const std::size_t n = 16;
  const auto words = enumerate_words(c.system(), n);
  for (double alpha : {-0.5, -0.1, 0.0, 0.2}) {
    const double window = 0.05;
    std::size_t hits = 0;
    for (const auto& w : words)
      if (std::abs(birkhoff_sum(w, c) / n - alpha) <= window) ++hits;
    const double rate = spectrum_brute_force(c, alpha, window, n);
    if (hits == 0)
      EXPECT_TRUE(std::isinf(rate) && rate < 0);
    else
      EXPECT_NEAR(rate, std::log(static_cast<double>(hits)) / n, 1e-12) << alpha;
  }
}

TEST(BruteForce, WithinBracket) {
  const auto& f = reference();
  const auto c = spectra::testing::reference_model();
  const auto r = check_brute_force(f.pressure, c, {-0.8, -0.4, 0.0}, 0.05, 200);
  EXPECT_TRUE(r.pass) << r.detail;
  for (double a : {-0.8, -0.4, 0.0}) {
    const auto br = brute_force_bracket(f.pressure, c, a, 0.05, 200);
    EXPECT_LE(br.lo, br.hi);
  }
}
