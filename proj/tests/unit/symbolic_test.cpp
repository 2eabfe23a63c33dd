#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spectra/cocycle.hpp"
#include "spectra/config.hpp"
#include "spectra/enumerate.hpp"
#include "spectra/errors.hpp"
#include "support/models.hpp"

using namespace spectra;
using spectra::testing::kLog2;

namespace {

std::vector<std::string> strs(const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.str());
  return out;
}

}  // namespace

TEST(Word, ParseRoundTrip) {
  EXPECT_EQ(Word::parse("0110").str(), "0110");
  EXPECT_EQ(Word::parse("09az").str(), "09az");
  EXPECT_EQ(Word::parse("").size(), 0u);
  EXPECT_THROW(Word::parse("01!"), InvalidArgument);
  EXPECT_EQ(Word::parse("0011").prefix(2).str(), "00");
  EXPECT_EQ(Word::parse("0011").reversed().str(), "1100");
}

TEST(Resolution, CylinderDepth) {
  Resolution r{3};
  EXPECT_EQ(r.cylinder_depth(5), 8u);
  EXPECT_DOUBLE_EQ(r.epsilon(), 0.125);
}

TEST(SymbolicSystem, RejectsNonPrimitive) {
  EXPECT_THROW(SymbolicSystem({{false, true}, {true, false}}), InvalidArgument);
  EXPECT_THROW(SymbolicSystem::full_shift(1), InvalidArgument);
  EXPECT_THROW(SymbolicSystem::with_forbidden(2, {Word::parse("111")}), InvalidArgument);
}

TEST(SymbolicSystem, BridgesConnectEveryPair) {
  const std::vector<SymbolicSystem> systems = {
      SymbolicSystem::full_shift(3),
      SymbolicSystem::with_forbidden(2, {Word::parse("11")}),
      SymbolicSystem::with_forbidden(3, {Word::parse("00"), Word::parse("12"), Word::parse("21")}),
  };
  for (const auto& sys : systems) {
    for (int a = 0; a < sys.alphabet_size(); ++a)
      for (int b = 0; b < sys.alphabet_size(); ++b) {
        Word w{static_cast<Symbol>(a)};
        w.append(sys.bridge(static_cast<Symbol>(a), static_cast<Symbol>(b)));
        w.push_back(static_cast<Symbol>(b));
        EXPECT_TRUE(sys.admissible(w)) << sys.describe() << " " << w.str();
        EXPECT_EQ(sys.bridge(static_cast<Symbol>(a), static_cast<Symbol>(b)).size(), sys.bridge_length());
      }
  }
}

TEST(SymbolicSystem, FirstViolation) {
  const auto gm = SymbolicSystem::with_forbidden(2, {Word::parse("11")});
  EXPECT_EQ(gm.first_violation(Word::parse("0110")), std::optional<std::size_t>(1));
  EXPECT_FALSE(gm.first_violation(Word::parse("01010")).has_value());
  try {
    gm.require_admissible(Word::parse("00011"));
    FAIL();
  } catch (const InadmissibleWord& e) {
    EXPECT_EQ(e.index(), 3u);
  }
}

TEST(Cocycle, BirkhoffExamples) {
  const auto c = spectra::testing::reference_model();
  EXPECT_NEAR(birkhoff_sum(Word::parse("0011"), c), -2.0 * kLog2, 1e-15);
  EXPECT_EQ(birkhoff_sum(Word{}, c), 0.0);
  const auto sym = CenterCocycle::locally_constant(SymbolicSystem::full_shift(2), {-1.0, 1.0});
  EXPECT_EQ(birkhoff_sum(Word::parse("01"), sym), 0.0);
}

TEST(Cocycle, FiniteTimeExponentExamples) {
  const auto c = spectra::testing::reference_model();
  EXPECT_NEAR(finite_time_exponent(Word::parse("0011"), c), -0.5 * kLog2, 1e-15);
  EXPECT_NEAR(finite_time_exponent(Word::parse("1111"), c), kLog2, 1e-15);
  EXPECT_NEAR(finite_time_exponent(Word::parse("011"), c), 0.0, 1e-15);
  EXPECT_THROW(finite_time_exponent(Word{}, c), InvalidArgument);
}

TEST(Cocycle, InadmissibleWordRejected) {
  const auto c = spectra::testing::golden_model();
  try {
    birkhoff_sum(Word::parse("0101100"), c);
    FAIL();
  } catch (const InadmissibleWord& e) {
    EXPECT_EQ(e.index(), 3u);
  }
}

TEST(Cocycle, DepthTwoModes) {
  // windows 00, 01, 10, 11
  const CenterCocycle c(SymbolicSystem::full_shift(2), 2, {1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(birkhoff_sum(Word::parse("0110"), c), 2.0 + 4.0 + 3.0);
  EXPECT_EQ(birkhoff_sum(Word::parse("0110"), c, BoundaryMode::kPeriodic), 2.0 + 4.0 + 3.0 + 1.0);
  EXPECT_THROW(birkhoff_sum(Word::parse("0"), c), InvalidArgument);
  EXPECT_DOUBLE_EQ(c.variation(), 1.0);
  const auto ps = prefix_sums(Word::parse("0110"), c);
  ASSERT_EQ(ps.size(), 4u);
  EXPECT_EQ(ps[0], 0.0);
  EXPECT_EQ(ps[3], 9.0);
}

TEST(Cocycle, AdditivityAndDefect) {
  std::mt19937_64 rng(11);
  const auto c1 = spectra::testing::reference_model();
  const CenterCocycle c2(SymbolicSystem::full_shift(2), 2, {0.3, -1.2, 0.7, 2.0});
  std::uniform_int_distribution<int> bit(0, 1), len(2, 30);
  for (int trial = 0; trial < 300; ++trial) {
    Word u, v;
    for (int i = len(rng); i > 0; --i) u.push_back(static_cast<Symbol>(bit(rng)));
    for (int i = len(rng); i > 0; --i) v.push_back(static_cast<Symbol>(bit(rng)));
    const Word uv = u + v;
    const double split = birkhoff_sum(u, c1) + birkhoff_sum(v, c1);
    EXPECT_NEAR(birkhoff_sum(uv, c1), split, 1e-12 * (1.0 + std::abs(split)));
    const double defect = birkhoff_sum(uv, c2) - birkhoff_sum(u, c2) - birkhoff_sum(v, c2);
    EXPECT_LE(std::abs(defect), (c2.depth() - 1) * c2.max_abs() + 1e-12);
    const double chi = finite_time_exponent(uv, c1);
    EXPECT_GE(chi, c1.min_value() - 1e-15);
    EXPECT_LE(chi, c1.max_value() + 1e-15);
  }
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(strs(enumerate_words(SymbolicSystem::full_shift(2), 2)),
            (std::vector<std::string>{"00", "01", "10", "11"}));
  const auto gm = SymbolicSystem::with_forbidden(2, {Word::parse("11")});
  EXPECT_EQ(strs(enumerate_words(gm, 3)), (std::vector<std::string>{"000", "001", "010", "100", "101"}));
  EXPECT_EQ(enumerate_words(SymbolicSystem::full_shift(3), 1).size(), 3u);
  EXPECT_THROW(enumerate_words(gm, 0), InvalidArgument);
  EXPECT_THROW(enumerate_words(SymbolicSystem::full_shift(2), 27), BudgetExceeded);
  EXPECT_THROW(enumerate_words(SymbolicSystem::full_shift(2), 11, 1000), BudgetExceeded);
}

TEST(Enumerate, IndependentStreams) {
  const auto sys = SymbolicSystem::full_shift(2);
  WordStream a(sys, 3), b(sys, 3);
  Word x, y;
  ASSERT_TRUE(a.next(x));
  ASSERT_TRUE(a.next(x));
  ASSERT_TRUE(b.next(y));
  EXPECT_EQ(x.str(), "001");
  EXPECT_EQ(y.str(), "000");
}

TEST(Enumerate, CountsMatchFibonacci) {
  const auto gm = SymbolicSystem::with_forbidden(2, {Word::parse("11")});
  BigInt a = 2, b = 3;  // F(3), F(4)
  for (std::size_t n = 1; n <= 90; ++n) {
    EXPECT_EQ(count_admissible(gm, n), a) << n;
    const BigInt next = a + b;
    a = b;
    b = next;
  }
  for (std::size_t n = 1; n <= 14; ++n) EXPECT_EQ(count_admissible(gm, n), BigInt(enumerate_words(gm, n).size()));
  EXPECT_EQ(count_admissible(SymbolicSystem::full_shift(2), 100), BigInt(1) << 100);
}

TEST(SeparatedCount, Examples) {
  const auto all2 = enumerate_words(SymbolicSystem::full_shift(2), 2);
  EXPECT_EQ(separated_count(all2, 2, Resolution{0}), 4u);
  const std::vector<Word> pair = {Word::parse("0000"), Word::parse("0001")};
  EXPECT_EQ(separated_count(pair, 2, Resolution{0}), 1u);
  EXPECT_EQ(separated_count(pair, 2, Resolution{2}), 2u);
  EXPECT_THROW(separated_count(pair, 3, Resolution{2}), InvalidArgument);
}

TEST(SeparatedCount, MonotoneAndBounded) {
  const auto gm = SymbolicSystem::with_forbidden(2, {Word::parse("11")});
  const auto words = enumerate_words(gm, 14);
  for (std::size_t n = 1; n + 4 <= 14; ++n)
    for (int j = 0; j <= 3; ++j) {
      const auto s = separated_count(words, n, Resolution{j});
      EXPECT_LE(s, separated_count(words, n + 1, Resolution{j}));
      if (j < 3) EXPECT_LE(s, separated_count(words, n, Resolution{j + 1}));
      EXPECT_LE(BigInt(s), count_admissible(gm, n + static_cast<std::size_t>(j)));
    }
}

TEST(SeparatedCount, ThinKeepsLeastRepresentative) {
  const std::vector<Word> ws = {Word::parse("0111"), Word::parse("0100"), Word::parse("1000"), Word::parse("0101")};
  const auto thin = thin_to_separated(ws, 2, Resolution{0});
  EXPECT_EQ(strs(thin), (std::vector<std::string>{"0100", "1000"}));
}

TEST(Config, ParsesModel) {
  const auto c = model_from_config(R"(
# reference model
[system]
alphabet = 2
forbidden = ["11"]

[cocycle]
depth = 1
values = [0.5, -1.0]
)");
  EXPECT_EQ(c.alphabet_size(), 2);
  EXPECT_FALSE(c.system().is_full_shift());
  EXPECT_EQ(c.max_value(), 0.5);
}

TEST(Config, ErrorsCarryPosition) {
  try {
    parse_config("[system]\nalphabet = 2\nalphabet = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_config("[system]\nalphabet = 2x\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(model_from_config("[system]\nalphabet = 2\n"), ConfigError);
  EXPECT_THROW(read_text_file("/nonexistent/spectra.toml"), ConfigError);
}

TEST(Config, HashIsStable) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}
