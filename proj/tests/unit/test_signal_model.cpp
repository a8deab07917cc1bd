#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "flux/common.hpp"
#include "flux/signal_model.hpp"

namespace flux {
namespace {

SignalModel three_point() {
  return SignalModel::empirical({{0.0, 0.2}, {0.5, 0.3}, {1.0, 0.5}}, 1.0);
}

TEST(SignalModel, RejectsInvalidParameters) {
  EXPECT_THROW(SignalModel::bernoulli(0.0, 1.0), ValidationError);
  EXPECT_THROW(SignalModel::bernoulli(1.0, 1.0), ValidationError);
  EXPECT_THROW(SignalModel::bernoulli(0.5, 0.0), ValidationError);
  EXPECT_THROW(SignalModel::uniform(-1.0), ValidationError);
  EXPECT_THROW(SignalModel::empirical({}, 1.0), ValidationError);
  EXPECT_THROW(SignalModel::empirical({{0.0, 0.5}, {1.5, 0.5}}, 1.0), ValidationError);
  EXPECT_THROW(SignalModel::empirical({{0.0, -0.1}, {1.0, 1.1}}, 1.0), ValidationError);
  EXPECT_THROW(SignalModel::empirical({{0.0, 0.5}, {1.0, 0.4}}, 1.0), ValidationError);
}

TEST(SignalModel, EmpiricalSortsAndMerges) {
  const auto m = SignalModel::empirical({{1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}}, 1.0);
  const auto pts = m.finite_support();
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].value, 0.0);
  EXPECT_EQ(pts[1].value, 1.0);
  EXPECT_DOUBLE_EQ(pts[1].probability, 0.5);
}

TEST(SignalModel, BernoulliSupportIsZeroAndD) {
  const auto pts = SignalModel::bernoulli(0.3, 2.0).finite_support();
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].value, 0.0);
  EXPECT_DOUBLE_EQ(pts[0].probability, 0.7);
  EXPECT_EQ(pts[1].value, 2.0);
  EXPECT_THROW(SignalModel::uniform(1.0).finite_support(), ValidationError);
}

TEST(BustedProbability, Examples) {
  EXPECT_DOUBLE_EQ(busted_probability(SignalModel::uniform(1.0), 0.5), 0.5);
  EXPECT_DOUBLE_EQ(busted_probability(SignalModel::bernoulli(0.3, 1.0), 0.7), 0.3);
  EXPECT_DOUBLE_EQ(busted_probability(three_point(), 0.5), 0.8);
}

TEST(BustedProbability, InclusiveAtAtoms) {
  EXPECT_DOUBLE_EQ(busted_probability(SignalModel::bernoulli(0.3, 1.0), 1.0), 0.3);
  EXPECT_DOUBLE_EQ(busted_probability(three_point(), 1.0), 0.5);
}

TEST(BustedProbability, ZeroAlphaIsCertain) {
  for (const auto& m : {SignalModel::uniform(1.0), SignalModel::bernoulli(0.2, 3.0), three_point()}) {
    EXPECT_EQ(busted_probability(m, 0.0), 1.0);
  }
}

TEST(BustedProbability, NonIncreasingInAlpha) {
  const std::array<SignalModel, 4> models = {SignalModel::uniform(1.0),
                                             SignalModel::bernoulli(0.4, 1.0), three_point(),
                                             discretize_uniform(1.0, 11)};
  for (const auto& m : models) {
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
      const double p = busted_probability(m, i / 100.0);
      EXPECT_LE(p, prev + 1e-15) << m.describe() << " alpha=" << i / 100.0;
      prev = p;
    }
  }
}

TEST(BustedProbability, BernoulliIgnoresAlpha) {
  const auto m = SignalModel::bernoulli(0.35, 1.0);
  for (double a : {0.01, 0.3, 0.5, 0.99, 1.0}) EXPECT_EQ(busted_probability(m, a), 0.35);
}

TEST(BustedProbability, RejectsAlphaOutsideUnitInterval) {
  EXPECT_THROW(busted_probability(SignalModel::uniform(1.0), -0.1), ValidationError);
  EXPECT_THROW(busted_probability(SignalModel::uniform(1.0), 1.1), ValidationError);
}

TEST(DiscretizeUniform, ElevenEqualMassLevels) {
  const auto pts = discretize_uniform(1.0, 11).finite_support();
  ASSERT_EQ(pts.size(), 11u);
  double total = 0.0;
  for (int i = 0; i < 11; ++i) {
    EXPECT_NEAR(pts[i].value, i / 10.0, 1e-15);
    EXPECT_NEAR(pts[i].probability, 1.0 / 11.0, 1e-15);
    total += pts[i].probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_EQ(pts.back().value, 1.0);
}

TEST(Sample, DeterministicPerStream) {
  for (const auto& m : {SignalModel::uniform(1.0), three_point(), SignalModel::bernoulli(0.5, 1.0)}) {
    auto a = RandomStream::derive(42, stream_purpose::kTest, 7);
    auto b = RandomStream::derive(42, stream_purpose::kTest, 7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(m, a).value, sample(m, b).value);
  }
}

TEST(Sample, DistinctTagsGiveDistinctStreams) {
  auto a = RandomStream::derive(42, stream_purpose::kTest, 0);
  auto b = RandomStream::derive(42, stream_purpose::kTest, 1);
  auto c = RandomStream::derive(43, stream_purpose::kTest, 0);
  const double x = a.next_unit();
  EXPECT_NE(x, b.next_unit());
  EXPECT_NE(x, c.next_unit());
}

TEST(Sample, UnitDrawsInHalfOpenInterval) {
  auto s = RandomStream::derive(1, stream_purpose::kTest, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.next_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Sample, NearCertainBernoulliStaysOnSupport) {
  const double p = 1.0 - 1e-3;
  const auto m = SignalModel::bernoulli(p, 1.0);
  auto s = RandomStream::derive(5, stream_purpose::kTest, 0);
  int full = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double y = sample(m, s).value;
    ASSERT_TRUE(y == 0.0 || y == 1.0);
    full += y == 1.0;
  }
  const double se = std::sqrt(p * (1 - p) / kDraws);
  EXPECT_NEAR(static_cast<double>(full) / kDraws, p, 4 * se);
}

TEST(Sample, EmpiricalFrequenciesWithinFourStandardErrors) {
  const auto m = three_point();
  auto s = RandomStream::derive(11, stream_purpose::kTest, 0);
  constexpr int kDraws = 100000;
  std::array<int, 3> counts{};
  for (int i = 0; i < kDraws; ++i) {
    const double y = sample(m, s).value;
    counts[y == 0.0 ? 0 : (y == 0.5 ? 1 : 2)]++;
  }
  const std::array<double, 3> probs = {0.2, 0.3, 0.5};
  for (int k = 0; k < 3; ++k) {
    const double se = std::sqrt(probs[k] * (1 - probs[k]) / kDraws);
    EXPECT_NEAR(static_cast<double>(counts[k]) / kDraws, probs[k], 4 * se) << "point " << k;
  }
}

TEST(Sample, UniformStaysInRange) {
  const auto m = SignalModel::uniform(2.5);
  auto s = RandomStream::derive(3, stream_purpose::kTest, 0);
  double total = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double y = sample(m, s).value;
    ASSERT_GE(y, 0.0);
    ASSERT_LE(y, 2.5);
    total += y;
  }
  const double se = 2.5 / std::sqrt(12.0 * kDraws);
  EXPECT_NEAR(total / kDraws, 1.25, 4 * se);
}

}  // namespace
}  // namespace flux
