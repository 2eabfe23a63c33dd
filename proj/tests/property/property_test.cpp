// Randomized property checks, 1000 cases each, fixed seeds.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>

#include "spectra/distribution.hpp"
#include "spectra/entropy.hpp"
#include "spectra/enumerate.hpp"
#include "spectra/errors.hpp"
#include "spectra/lattice_dp.hpp"
#include "spectra/pressure.hpp"
#include "spectra/skeleton.hpp"
#include "support/properties.hpp"

using namespace spectra;
using spectra::testing::draw_sft;

namespace {

constexpr int kCases = 1000;

std::vector<Word> random_words(std::mt19937_64& rng, int k, std::size_t length, std::size_t count) {
  std::uniform_int_distribution<int> sym(0, k - 1);
  std::vector<Word> out(count);
  for (auto& w : out)
    for (std::size_t i = 0; i < length; ++i) w.push_back(static_cast<Symbol>(sym(rng)));
  return out;
}

}  // namespace

TEST(Property, SubsetRateAtMostSupersetRate) {
  const auto r = spectra::testing::subset_monotonicity(20240601, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.pass()) << r.failures << " failures, first: " << r.first_failure;
  RecordProperty("worst_excess", std::to_string(r.worst_excess));
}

TEST(Property, SubsetCountsAtMostSupersetCounts) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> alphabet(2, 4);
  std::uniform_int_distribution<std::size_t> size(1, 300), length(4, 24);
  for (int trial = 0; trial < kCases; ++trial) {
    const int k = alphabet(rng);
    const std::size_t len = length(rng);
    const auto words = random_words(rng, k, len, size(rng));
    std::vector<Word> subset;
    std::bernoulli_distribution keep(0.5);
    for (const auto& w : words)
      if (keep(rng)) subset.push_back(w);
    if (subset.empty()) subset.push_back(words.front());
    const WordSetCounter all(words), part(subset);
    for (std::size_t d = 0; d <= len; ++d) ASSERT_LE(part.count(d), all.count(d));
    for (int j = 0; j <= 2; ++j)
      for (std::size_t n = 1; n + static_cast<std::size_t>(j) <= len; ++n)
        ASSERT_LE(log_cover_cost(part, n, Resolution{j}, 0.3), log_cover_cost(all, n, Resolution{j}, 0.3));
  }
}

TEST(Property, CountableStabilityOnDisjointPrefixUnions) {
  const auto r = spectra::testing::countable_stability(99, kCases);
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.pass()) << r.failures << " failures, first: " << r.first_failure;
  RecordProperty("worst_excess", std::to_string(r.worst_excess));
}

TEST(Property, SeparatedCountMonotone) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(1, 200), length(6, 20);
  for (int trial = 0; trial < kCases; ++trial) {
    const std::size_t len = length(rng);
    const auto words = random_words(rng, 2, len, size(rng));
    for (std::size_t n = 1; n + 2 <= len; ++n) {
      const auto s0 = separated_count(words, n, Resolution{0});
      ASSERT_LE(s0, separated_count(words, n, Resolution{1}));
      ASSERT_LE(s0, separated_count(words, n + 1, Resolution{0}));
      ASSERT_LE(s0, std::size_t{1} << n);
    }
  }
}

TEST(Property, BallMassesPartitionTheSupport) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> size(1, 60), length(3, 10);
  std::uniform_int_distribution<int> alphabet(2, 3);
  for (int trial = 0; trial < kCases; ++trial) {
    const std::size_t len = length(rng);
    const CylinderMeasure m(random_words(rng, alphabet(rng), len, size(rng)));
    std::uniform_int_distribution<std::size_t> depth(1, len);
    const std::size_t d = depth(rng);
    std::map<Word, bool> cells;
    for (const auto& w : m.support()) cells[w.prefix(d)] = true;
    BigRational total = 0;
    for (const auto& [p, _] : cells) total += ball_mass(m, p, d, Resolution{0});
    ASSERT_EQ(total, BigRational(1));
  }
}

TEST(Property, WindowDpMatchesEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(-1.5, 1.5), alpha(-0.8, 0.8), eps(0.0, 0.3);
  std::uniform_int_distribution<std::size_t> length(1, 12);
  for (int trial = 0; trial < kCases; ++trial) {
    const SymbolicSystem sys = draw_sft(rng, 2 + static_cast<int>(trial % 2), 0.2);
    std::vector<double> phi(static_cast<std::size_t>(sys.alphabet_size()));
    for (auto& v : phi) v = std::round(value(rng) * 8.0) / 8.0;
    const auto c = CenterCocycle::locally_constant(sys, phi);
    const double a = alpha(rng), e = eps(rng), K0 = 1.0 + std::abs(value(rng));
    const std::size_t m = length(rng);
    LatticeConstraint lc;
    lc.length = m;
    const double logK = std::log(K0);
    lc.prefix_ok = [&](std::size_t l, double s) { return within_window(s, l, a, logK, e); };
    ASSERT_EQ(count_lattice_words(c, lc), window_count_by_enumeration(c, a, e, K0, m));
  }
}

TEST(Property, PressureConvexLipschitzAndSlopeBounded) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> value(-2.0, 2.0), q(-3.0, 3.0);
  for (int trial = 0; trial < kCases; ++trial) {
    const SymbolicSystem sys = draw_sft(rng, 2 + static_cast<int>(trial % 3), 0.2);
    std::vector<double> phi(static_cast<std::size_t>(sys.alphabet_size()));
    for (auto& v : phi) v = value(rng);
    const PressureFunction p(CenterCocycle::locally_constant(sys, phi));
    const double q0 = q(rng), h = 0.25;
    ASSERT_GE(p(q0 - h) + p(q0 + h) - 2.0 * p(q0), -1e-9);
    ASSERT_LE(std::abs(p(q0 + h) - p(q0)), h * p.lipschitz() + 1e-9);
    ASSERT_GE(p.evaluate(q0).slope, p.alpha_min() - 1e-9);
    ASSERT_LE(p.evaluate(q0).slope, p.alpha_max() + 1e-9);
  }
}
