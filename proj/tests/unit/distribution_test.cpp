#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "spectra/distribution.hpp"
#include "spectra/enumerate.hpp"
#include "spectra/errors.hpp"
#include "support/towers.hpp"

using namespace spectra;
using spectra::testing::kLog2;

namespace {

std::span<const Symbol> head(const Word& w, std::size_t n) { return w.symbols().subspan(0, n); }

}  // namespace

TEST(CylinderMeasure, BallMassExamples) {
  const CylinderMeasure m(enumerate_words(SymbolicSystem::full_shift(2), 2));
  EXPECT_EQ(ball_mass(m, Word::parse("01"), 2, Resolution{0}), BigRational(1, 4));
  const CylinderMeasure three({Word::parse("00"), Word::parse("01"), Word::parse("10")});
  EXPECT_EQ(ball_mass(three, Word::parse("11"), 2, Resolution{0}), BigRational(0));
  EXPECT_EQ(ball_mass(three, Word::parse("01"), 1, Resolution{0}), BigRational(2, 3));
  EXPECT_THROW(ball_mass(m, Word::parse("01"), 2, Resolution{1}), InvalidArgument);
  EXPECT_THROW(ball_mass(CylinderMeasure{}, Word::parse("01"), 1, Resolution{0}), EmptyDomain);
}

TEST(CylinderMeasure, PartitionsSumToOne) {
  const auto m = CylinderMeasure::from_tower(*spectra::testing::small_tower().tower, 1);
  for (std::size_t depth = 0; depth <= m.length(); ++depth) {
    std::map<Word, bool> cells;
    for (const auto& w : m.support()) cells[w.prefix(depth)] = true;
    BigRational total = 0;
    for (const auto& [p, _] : cells) total += m.mass(p.symbols());
    EXPECT_EQ(total, BigRational(1)) << depth;
  }
}

TEST(CylinderMeasure, RejectsSampledTower) {
  EXPECT_THROW(CylinderMeasure::from_tower(*spectra::testing::reference_tower().tower, 1), InvalidArgument);
}

TEST(TowerMeasure, AgreesWithListedFamily) {
  const auto& t = *spectra::testing::handmade_golden_tower().tower;
  const auto listed = CylinderMeasure::from_tower(t, 2);
  ASSERT_EQ(BigInt(listed.size()), t.card_E(2));
  const TowerMeasure tm(t);
  ASSERT_EQ(tm.length(), listed.length());
  for (std::size_t i = 0; i < listed.size(); i += 211) {
    const Word& w = listed.support()[i];
    for (std::uint64_t d = 0; d <= tm.length(); ++d)
      ASSERT_EQ(tm.mass(w, d), listed.mass(head(w, d))) << "member " << i << " depth " << d;
  }
  for (std::uint64_t d = 1; d <= tm.length(); ++d) {
    const double exact = std::log(static_cast<double>(listed.max_cylinder_count(d)) / listed.size());
    const double bound = tm.log_max_mass(d);
    EXPECT_GE(bound, exact - 1e-12) << d;
    const auto kind = t.segment_at(d - 1).kind;
    if (kind == Segment::Kind::kBlock) EXPECT_NEAR(bound, exact, 1e-9) << d;
  }
}

TEST(TowerMeasure, OffSupportCylindersAreEmpty) {
  const auto& t = *spectra::testing::handmade_golden_tower().tower;
  const TowerMeasure tm(t);
  Word w = t.member(0);
  w[5] = 1;
  w[6] = 1;  // "11" never occurs
  EXPECT_EQ(tm.mass(w, 7), BigRational(0));
}

TEST(TowerMeasure, LevelCylinderMassIsInverseCardinality) {
  const auto& t = *spectra::testing::handmade_golden_tower().tower;
  const TowerMeasure tm(t);
  for (std::size_t i = 0; i < t.member_count(); i += 1013) {
    const Word w = t.member(i);
    EXPECT_EQ(tm.mass(w, t.word_length(1)), BigRational(BigInt(1), t.card_E(1)));
    EXPECT_EQ(tm.mass(w, t.word_length(2)), BigRational(BigInt(1), t.card_E(2)));
  }
}

TEST(TowerMeasure, LevelsAreConsistent) {
  const auto& t = *spectra::testing::handmade_golden_tower().tower;
  const auto level1 = CylinderMeasure::from_tower(t, 1);
  const auto level2 = CylinderMeasure::from_tower(t, 2);
  for (std::size_t i = 0; i < level2.size(); i += 307)
    for (std::size_t d = 0; d <= level1.length(); ++d) {
      const auto p = head(level2.support()[i], d);
      EXPECT_EQ(level1.mass(p), level2.mass(p));
    }
}

TEST(Audit, SingleWordFails) {
  const CylinderMeasure m({Word::parse("0101010101")});
  const auto r = local_entropy_audit(m, 0.05, NRange{1, 10}, Resolution{0}, kLog2);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(r.failures, 10u);
  const auto cert = edp_certificate(m, 0.05, NRange{1, 10}, Resolution{0}, kLog2);
  EXPECT_FALSE(cert.certified);
  EXPECT_FALSE(cert.lower_bound.has_value());
}

TEST(Audit, ThetaAboveTargetIsVacuous) {
  const CylinderMeasure m({Word::parse("0101010101")});
  const auto r = local_entropy_audit(m, 1.0, NRange{1, 10}, Resolution{0}, kLog2);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.vacuous);
}

TEST(Audit, BernoulliCertificate) {
  const CylinderMeasure m(enumerate_words(SymbolicSystem::full_shift(2), 16));
  const auto cert = edp_certificate(m, 0.01, NRange{1, 16}, Resolution{0}, kLog2);
  ASSERT_TRUE(cert.certified);
  EXPECT_NEAR(*cert.lower_bound, kLog2 - 0.01, 1e-15);
  EXPECT_EQ(cert.audit.n0, std::optional<std::size_t>(1));
  EXPECT_NEAR(cert.direct.rate, kLog2, 1e-12);
  EXPECT_TRUE(cert.consistent);
  EXPECT_NE(cert.statement.find(">="), std::string::npos);
}

TEST(Audit, EmptySupportIsAnError) {
  EXPECT_THROW(edp_certificate(CylinderMeasure{}, 0.05, NRange{1, 4}, Resolution{0}, kLog2), EmptyDomain);
}

TEST(Audit, ExplicitTowerMatchesListedAudit) {
  const auto& t = *spectra::testing::handmade_golden_tower().tower;
  const auto listed = CylinderMeasure::from_tower(t, 2);
  const NRange range{1, t.word_length(2)};
  const double h = 0.3;
  const auto a = local_entropy_audit(TowerMeasure(t), 0.05, range, Resolution{0}, h);
  const auto b = local_entropy_audit(listed, 0.05, range, Resolution{0}, h);
  EXPECT_EQ(a.pass, b.pass);
  EXPECT_EQ(a.n0, b.n0);
  EXPECT_NEAR(a.worst_margin, b.worst_margin, 1e-9);
}

TEST(Audit, ReferenceTowerCertificate) {
  const auto& f = spectra::testing::reference_tower();
  const auto cert = edp_certificate(*f.tower, 0.05);
  ASSERT_TRUE(cert.certified) << cert.audit.detail;
  ASSERT_TRUE(cert.audit.n0.has_value());
  EXPECT_NEAR(*cert.lower_bound, f.schedule.h_frak - 0.05, 1e-15);
  EXPECT_GE(cert.audit.tail_margin, 0.0);
  EXPECT_TRUE(cert.consistent);
  EXPECT_LE(std::abs(cert.direct.rate - *cert.lower_bound), 0.05);
}
