#include <gtest/gtest.h>

#include <cmath>

#include "spectra/entropy.hpp"
#include "spectra/enumerate.hpp"
#include "spectra/errors.hpp"
#include "support/towers.hpp"

using namespace spectra;
using spectra::testing::kGolden;
using spectra::testing::kLog2;

TEST(Entropy, FullShiftIsLog2) {
  const ShiftCounter full(SymbolicSystem::full_shift(2));
  for (auto method : {EntropyMethod::kSeparated, EntropyMethod::kSpanning, EntropyMethod::kCoverCost}) {
    const auto e = estimate_entropy(full, NRange{10, 60}, Resolution{0}, method);
    EXPECT_NEAR(e.rate, kLog2, 1e-12) << to_string(method);
  }
  const auto words = enumerate_words(SymbolicSystem::full_shift(2), 16);
  EXPECT_NEAR(estimate_entropy(words, NRange{1, 16}, Resolution{0}).rate, kLog2, 1e-12);
  EXPECT_NEAR(estimate_entropy(words, NRange{1, 13}, Resolution{3}).rate, kLog2, 1e-12);
}

TEST(Entropy, FixedWordHasZeroRate) {
  const std::vector<Word> ws = {Word(std::vector<Symbol>(64, 0))};
  const auto e = estimate_entropy(ws, NRange{1, 64}, Resolution{0});
  EXPECT_EQ(e.rate, 0.0);
  EXPECT_EQ(e.residual, 0.0);
}

TEST(Entropy, GoldenMean) {
  const auto gm = SymbolicSystem::with_forbidden(2, {Word::parse("11")});
  const ShiftCounter counter(gm);
  EXPECT_NEAR(estimate_entropy(counter, NRange{20, 60}, Resolution{0}).rate, std::log(kGolden), 1e-3);
  const auto words = enumerate_words(gm, 22);
  EXPECT_NEAR(estimate_entropy(words, NRange{2, 22}, Resolution{0}).rate, std::log(kGolden), 1e-3);
}

TEST(Entropy, ResolutionStability) {
  const ShiftCounter counter(SymbolicSystem::with_forbidden(2, {Word::parse("11")}));
  const auto base = estimate_entropy(counter, NRange{20, 60}, Resolution{1});
  for (int j = 2; j <= 4; ++j) {
    const auto e = estimate_entropy(counter, NRange{20, 60}, Resolution{j});
    EXPECT_NEAR(e.rate, base.rate, base.residual + e.residual + 1e-9) << j;
  }
}

TEST(Entropy, SpanningBelowSeparated) {
  const auto words = enumerate_words(SymbolicSystem::with_forbidden(2, {Word::parse("11")}), 20);
  for (int j = 0; j <= 3; ++j) {
    const NRange r{2, 20 - static_cast<std::size_t>(j)};
    const auto sep = estimate_entropy(words, r, Resolution{j});
    const auto span = estimate_entropy(words, r, Resolution{j}, EntropyMethod::kSpanning);
    EXPECT_LE(span.rate, sep.rate + sep.residual + span.residual + 1e-12);
    const WordSetCounter counter(words);
    for (std::size_t n = r.first; n <= r.last; ++n)
      EXPECT_LE(log_method_count(counter, n, Resolution{j}, EntropyMethod::kSpanning),
                log_method_count(counter, n, Resolution{j}, EntropyMethod::kSeparated));
  }
}

TEST(Entropy, CoverCostMonotoneInResolution) {
  const auto words = enumerate_words(SymbolicSystem::with_forbidden(2, {Word::parse("11")}), 18);
  const WordSetCounter counter(words);
  for (std::size_t n = 1; n <= 14; ++n)
    for (double h : {0.0, 0.3, 0.48, 0.7})
      for (int j = 0; j < 4; ++j)
        EXPECT_LE(log_cover_cost(counter, n, Resolution{j}, h), log_cover_cost(counter, n, Resolution{j + 1}, h));
}

TEST(Entropy, CapacitiveExamples) {
  const ShiftCounter full(SymbolicSystem::full_shift(2));
  const auto c = capacitive_entropies(full, NRange{10, 60}, Resolution{0});
  EXPECT_NEAR(c.lower, kLog2, 1e-12);
  EXPECT_NEAR(c.upper, kLog2, 1e-12);
  EXPECT_LE(c.lower, c.upper);
  const std::vector<Word> two = {Word(std::vector<Symbol>(30, 0)), Word(std::vector<Symbol>(30, 1))};
  const auto z = capacitive_entropies(two, NRange{1, 30}, Resolution{0});
  EXPECT_EQ(z.lower, 0.0);
  EXPECT_EQ(z.upper, 0.0);
}

TEST(Entropy, Errors) {
  const auto words = enumerate_words(SymbolicSystem::full_shift(2), 8);
  EXPECT_THROW(estimate_entropy(words, NRange{3, 3}, Resolution{0}), InvalidArgument);
  EXPECT_THROW(estimate_entropy(words, NRange{1, 8}, Resolution{1}), InvalidArgument);
  EXPECT_THROW(estimate_entropy(std::vector<Word>{}, NRange{1, 4}, Resolution{0}), EmptyDomain);
  EXPECT_THROW(parse_n_range("10"), InvalidArgument);
  EXPECT_THROW(parse_n_range("9:x"), InvalidArgument);
  const auto r = parse_n_range("10:60");
  EXPECT_EQ(r.first, 10u);
  EXPECT_EQ(r.last, 60u);
  EXPECT_EQ(r.size(), 51u);
  EXPECT_EQ(parse_entropy_method("cover_cost"), EntropyMethod::kCoverCost);
  EXPECT_FALSE(parse_entropy_method("bogus").has_value());
}

TEST(Entropy, ReadWords) {
  const auto ws = read_words("# header\n0101\n\n  \n1100\n");
  ASSERT_EQ(ws.size(), 2u);
  EXPECT_EQ(ws[1].str(), "1100");
}

TEST(Entropy, FitLine) {
  const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.residual, 0.0, 1e-14);
}

TEST(Entropy, TowerCounterMatchesListedFamily) {
  const auto& t = *spectra::testing::handmade_golden_tower().tower;
  std::vector<Word> members;
  for (std::size_t i = 0; i < t.member_count(); ++i) members.push_back(t.member(i));
  const WordSetCounter listed(members);
  const TowerCounter structural(t);
  ASSERT_EQ(structural.max_depth(), listed.max_depth());
  for (std::uint64_t d = 1; d <= listed.max_depth(); ++d) {
    const double exact = listed.log_count(d);
    EXPECT_LE(structural.log_count(d), exact + 1e-12) << d;
    if (t.segment_at(d - 1).kind == Segment::Kind::kBlock) EXPECT_NEAR(structural.log_count(d), exact, 1e-9) << d;
  }
}

TEST(Entropy, ReferenceTowerSupport) {
  const auto& t = *spectra::testing::reference_tower().tower;
  const TowerCounter counter(t);
  const auto len = t.word_length(t.depth());
  const auto e = estimate_entropy(counter, NRange{len / 2, len}, Resolution{0});
  EXPECT_NEAR(e.rate, spectra::testing::reference_h0(), 0.1);
  const auto cap = capacitive_entropies(counter, NRange{len / 2, len}, Resolution{0});
  EXPECT_LE(cap.lower, cap.upper);
}
