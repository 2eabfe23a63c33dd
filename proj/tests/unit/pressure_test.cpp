#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spectra/errors.hpp"
#include "spectra/markov_measure.hpp"
#include "spectra/pressure.hpp"
#include "support/models.hpp"

using namespace spectra;
using spectra::testing::kGolden;
using spectra::testing::kLog2;

namespace {

// Largest root of l^2 - x l - x e^{-q} for the golden-mean model.
double golden_pressure(double q) {
  const double x = std::exp(0.5 * q);
  return std::log(0.5 * (x + std::sqrt(x * x + 4.0 * x * std::exp(-q))));
}

}  // namespace

TEST(Pressure, ReferenceClosedForm) {
  const PressureFunction p(spectra::testing::reference_model());
  double worst = 0.0;
  for (double q : linear_grid(-20.0, 20.0, 401))
    worst = std::max(worst, std::abs(p(q) - std::log(std::pow(4.0, -q) + std::pow(2.0, q))));
  EXPECT_LE(worst, 1e-10);
}

TEST(Pressure, GoldenClosedFormIncludingNearPeriodic) {
  const PressureFunction p(spectra::testing::golden_model());
  for (double q : linear_grid(-50.0, 50.0, 201)) EXPECT_NEAR(p(q), golden_pressure(q), 1e-9 * (1 + std::abs(q))) << q;
  EXPECT_NEAR(p(0.0), std::log(kGolden), 1e-12);
  EXPECT_NEAR(topological_entropy(spectra::testing::golden_model().system()), std::log(kGolden), 1e-12);
}

TEST(Pressure, ConvexAndLipschitz) {
  for (const auto& c : {spectra::testing::reference_model(), spectra::testing::golden_model()}) {
    const auto curve = pressure_curve(c, linear_grid(-20.0, 20.0, 401));
    const double h = curve.q_grid[1] - curve.q_grid[0];
    for (std::size_t i = 1; i + 1 < curve.values.size(); ++i) {
      EXPECT_GE(curve.values[i - 1] + curve.values[i + 1] - 2.0 * curve.values[i], -1e-9);
      EXPECT_LE(std::abs(curve.values[i] - curve.values[i - 1]), c.max_abs() * h + 1e-9);
    }
  }
}

TEST(Pressure, AsymptoticSlopes) {
  const auto c = spectra::testing::reference_model();
  const PressureFunction p(c);
  EXPECT_DOUBLE_EQ(p.alpha_min(), std::log(0.25));
  EXPECT_DOUBLE_EQ(p.alpha_max(), kLog2);
  EXPECT_NEAR(p.evaluate(-50.0).slope, std::log(0.25), 1e-6);
  EXPECT_NEAR(p.evaluate(50.0).slope, kLog2, 1e-6);
  const auto curve = pressure_curve(c, linear_grid(-20.0, 20.0, 41));
  EXPECT_NEAR(curve.end_slope_min, std::log(0.25), 1e-6);
  EXPECT_NEAR(curve.end_slope_max, kLog2, 1e-6);
}

TEST(Pressure, SlopeMatchesDerivative) {
  const PressureFunction p(spectra::testing::reference_model());
  for (double q : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
    const double a = std::pow(4.0, -q), b = std::pow(2.0, q);
    EXPECT_NEAR(p.evaluate(q).slope, (-a * std::log(4.0) + b * kLog2) / (a + b), 1e-10);
  }
}

TEST(Pressure, DepthTwoAgreesWithDepthOne) {
  // A depth-2 potential reading only the last symbol.
  const CenterCocycle c2(SymbolicSystem::full_shift(2), 2, {std::log(0.25), kLog2, std::log(0.25), kLog2});
  const PressureFunction p1(spectra::testing::reference_model()), p2(c2);
  for (double q : {-5.0, -1.0, 0.0, 2.0, 7.0}) EXPECT_NEAR(p1(q), p2(q), 1e-11);
}

TEST(Pressure, VariationalInequalityForMarkovMeasures) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  const auto ref = spectra::testing::reference_model();
  const auto gm = spectra::testing::golden_model();
  const PressureFunction pr(ref), pg(gm);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = u(rng), b = u(rng);
    const MarkovMeasure mr(ref.system(), {{a, 1 - a}, {b, 1 - b}});
    const MarkovMeasure mg(gm.system(), {{a, 1 - a}, {1.0, 0.0}});
    const auto er = measure_entropy_and_exponent(mr, ref);
    const auto eg = measure_entropy_and_exponent(mg, gm);
    for (double q : {-4.0, -1.0, 0.0, 0.5, 3.0}) {
      EXPECT_LE(er.entropy + q * er.exponent, pr(q) + 1e-9);
      EXPECT_LE(eg.entropy + q * eg.exponent, pg(q) + 1e-9);
    }
  }
}

TEST(Pressure, RestrictedBelowFull) {
  const auto c = spectra::testing::reference_model();
  const PressureFunction p(c);
  const RestrictedPressure neg(c, Restriction::kNegative), pos(c, Restriction::kPositive);
  for (double q : linear_grid(-5.0, 5.0, 41)) {
    EXPECT_LE(neg(q), p(q) + 1e-9);
    EXPECT_LE(pos(q), p(q) + 1e-9);
  }
  // P'(0) < 0 here, so the unconstrained maximizer at q = 0 is negative.
  EXPECT_NEAR(neg(0.0), p(0.0), 1e-8);
  EXPECT_LT(pos(0.0), p(0.0) - 1e-3);
}

TEST(Pressure, RestrictedEmptySide) {
  const auto c = CenterCocycle::locally_constant(SymbolicSystem::full_shift(2), {1.0, 2.0});
  EXPECT_THROW(pressure_restricted(c, 0.0, Restriction::kNegative), EmptyDomain);
}

TEST(Pressure, Avoiding) {
  const auto c = spectra::testing::reference_model();
  EXPECT_NEAR(pressure_avoiding(c, 1.5, Word::parse("1")), 1.5 * std::log(0.25), 1e-12);
  const auto gm_ref = CenterCocycle::locally_constant(SymbolicSystem::with_forbidden(2, {Word::parse("11")}),
                                                      {std::log(0.25), kLog2});
  for (double q : {-2.0, 0.0, 1.0}) EXPECT_NEAR(pressure_avoiding(c, q, Word::parse("11")), pressure_full(gm_ref, q), 1e-10);
}

TEST(Pressure, GridHelpers) {
  const auto g = linear_grid(-1.0, 1.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), -1.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(g[2], 0.0);
}

TEST(MarkovMeasure, BernoulliEntropyAndExponent) {
  const auto c = spectra::testing::reference_model();
  const auto m = MarkovMeasure::bernoulli(c.system(), {0.25, 0.75});
  const auto e = measure_entropy_and_exponent(m, c);
  EXPECT_NEAR(e.entropy, -(0.25 * std::log(0.25) + 0.75 * std::log(0.75)), 1e-14);
  EXPECT_NEAR(e.exponent, 0.25 * std::log(0.25) + 0.75 * kLog2, 1e-14);
  EXPECT_LT(m.residual(), 1e-12);
  EXPECT_THROW(MarkovMeasure(c.system(), {{0.5, 0.6}, {0.5, 0.5}}), InvalidArgument);
}
