#include <gtest/gtest.h>

#include <cmath>

#include "flux/dp_oracle.hpp"
#include "flux/single_player.hpp"

namespace flux {
namespace {

constexpr double kGridP[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

TEST(TruthfulThreshold, Examples) {
  EXPECT_NEAR(truthful_threshold(2, 0.5), 3.0, 1e-12);
  EXPECT_NEAR(truthful_threshold(3, 0.5), 7.0 / 3.0, 1e-12);
  EXPECT_NEAR(truthful_threshold(5, 0.3), 3.649295959994736, 1e-12);
  EXPECT_NEAR(truthful_threshold(200, 0.5), 2.0, 1e-12);
}

TEST(TruthfulThreshold, RejectsDegenerateInputs) {
  EXPECT_THROW(truthful_threshold(2, 0.0), ValidationError);
  EXPECT_THROW(truthful_threshold(2, 1.0), ValidationError);
  EXPECT_THROW(truthful_threshold(1, 0.5), ValidationError);
}

TEST(TruthfulThreshold, BoundedBelowByInverseP) {
  for (double p : kGridP) {
    for (int t = 2; t <= 40; ++t) EXPECT_GE(truthful_threshold(t, p), 1.0 / p - 1e-12);
  }
}

TEST(TruthfulThreshold, AtLeastHistoryThreshold) {
  for (double p : kGridP) {
    for (int t = 2; t <= 30; ++t) {
      EXPECT_GE(truthful_threshold(t, p), history_threshold(t, p)) << "t=" << t << " p=" << p;
    }
  }
}

TEST(HistoryThreshold, Examples) {
  EXPECT_NEAR(history_threshold(1, 0.3), 1.0, 1e-12);
  EXPECT_NEAR(history_threshold(2, 0.3), 0.51 / 0.39, 1e-12);
  EXPECT_NEAR(history_threshold(3, 0.7), 1.0 / 1.4, 1e-12);
  EXPECT_NEAR(history_threshold(1, 0.7), 1.0, 1e-12);
}

TEST(HistoryThreshold, BranchesMeetAtOneHalf) {
  for (int t = 1; t <= 20; ++t) EXPECT_EQ(history_threshold(t, 0.5), 1.0);
}

TEST(HistoryThreshold, IncreasingBelowOneHalf) {
  for (double p : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
    for (int t = 2; t <= 30; ++t) {
      EXPECT_GT(history_threshold(t, p), history_threshold(t - 1, p));
      EXPECT_LT(history_threshold(t, p), 1.0 / (2.0 * p));
    }
  }
}

TEST(ClassifyStrategy, TableExamples) {
  EXPECT_EQ(classify_strategy(5, 0.7, 0.5), StrategyClass{LyingTillEnd{}});
  EXPECT_EQ(classify_strategy(5, 0.7, 0.9), StrategyClass{LyingTillBustedPlusLieLastRound{}});
  EXPECT_EQ(classify_strategy(5, 0.7, 1.2), StrategyClass{LyingTillBusted{}});
  EXPECT_EQ(classify_strategy(5, 0.3, 4.0), StrategyClass{HonestTillEnd{}});
}

TEST(ClassifyStrategy, MixedRegimeCountsChronologicalRounds) {
  // h(1) = 1 <= 1.2 < h(2): a truthful history stays truthful only in the
  // last round, so the first four rounds of the game are played lying-till-end.
  EXPECT_EQ(classify_strategy(5, 0.3, 1.2), StrategyClass{MixedLieFirst{4}});
  // Between h(3) and h(4): truthful with 1..3 rounds left.
  const double r = 0.5 * (history_threshold(3, 0.3) + history_threshold(4, 0.3));
  EXPECT_EQ(classify_strategy(5, 0.3, r), StrategyClass{MixedLieFirst{2}});
}

TEST(ClassifyStrategy, BoundaryTiesGoTruthful) {
  EXPECT_EQ(classify_strategy(2, 0.5, 3.0), StrategyClass{HonestTillEnd{}});
  EXPECT_EQ(classify_strategy(5, 0.7, 1.0 / 1.4), StrategyClass{LyingTillBustedPlusLieLastRound{}});
  EXPECT_EQ(classify_strategy(5, 0.7, 1.0), StrategyClass{LyingTillBusted{}});
}

TEST(ClassifyStrategy, AgreesWithOracleOnDenseRates) {
  const ReportGrid grid = ReportGrid::binary(1.0);
  for (int t = 2; t <= 6; ++t) {
    for (double p : kGridP) {
      const auto model = SignalModel::bernoulli(p, 1.0);
      for (double r = 0.0; r <= 11.0; r += 0.0371) {
        const auto solved = solve_single(SinglePlayerGame(t, r, model), grid).policy;
        ASSERT_EQ(induced_policy(classify_strategy(t, p, r), t, 1.0), solved)
            << "T=" << t << " p=" << p << " r=" << r;
      }
    }
  }
}

TEST(ClassifyStrategy, ToStringNamesEveryClass) {
  EXPECT_EQ(to_string(StrategyClass{LyingTillEnd{}}), "lying-till-end");
  EXPECT_EQ(to_string(StrategyClass{HonestTillEnd{}}), "honest-till-end");
  EXPECT_EQ(to_string(StrategyClass{MixedLieFirst{3}}), "lying-till-end-first-3+lying-till-busted");
}

TEST(InducedPolicy, RejectsOutOfRangeMixedCount) {
  EXPECT_THROW(induced_policy(MixedLieFirst{0}, 4, 1.0), ValidationError);
  EXPECT_THROW(induced_policy(MixedLieFirst{4}, 4, 1.0), ValidationError);
  EXPECT_NO_THROW(induced_policy(MixedLieFirst{3}, 4, 1.0));
}

TEST(InducedPolicy, StaysLyingOnZeroHistory) {
  for (const StrategyClass s : {StrategyClass{LyingTillEnd{}}, StrategyClass{LyingTillBusted{}},
                                StrategyClass{HonestTillEnd{}}, StrategyClass{MixedLieFirst{1}}}) {
    const auto pol = induced_policy(s, 4, 1.0);
    for (int t = 1; t < 4; ++t) EXPECT_EQ(pol.report(t, History::prior(0.0), 0.0), 0.0);
  }
}

TEST(SegmentCosts, Examples) {
  auto c = segment_costs(2, 0.5, 3.0, 1.0);
  EXPECT_NEAR(c.expected_honest, 1.5, 1e-12);
  EXPECT_NEAR(c.expected_lying, 1.5, 1e-12);
  c = segment_costs(3, 0.5, 1.0, 1.0);
  EXPECT_NEAR(c.expected_honest, 1.75, 1e-12);
  EXPECT_NEAR(c.expected_lying, 0.75, 1e-12);
  c = segment_costs(2, 0.5, 0.0, 1.0);
  EXPECT_NEAR(c.expected_honest, 1.5, 1e-12);
  EXPECT_EQ(c.expected_lying, 0.0);
}

TEST(SegmentCosts, EqualAtThreshold) {
  for (double p : kGridP) {
    for (int t = 2; t <= 12; ++t) {
      const auto c = segment_costs(t, p, truthful_threshold(t, p), 1.7);
      EXPECT_NEAR(c.expected_honest, c.expected_lying, 1e-12 * c.expected_honest);
    }
  }
}

TEST(ThresholdCurve, Shapes) {
  const auto low = threshold_curve(10, 0.3);
  ASSERT_EQ(low.rows.size(), 10u);
  for (std::size_t i = 0; i < low.rows.size(); ++i) {
    EXPECT_EQ(low.rows[i].rounds_left, static_cast<int>(i) + 1);
    if (i > 0) EXPECT_GT(low.rows[i].truthful_history, low.rows[i - 1].truthful_history);
    EXPECT_EQ(low.rows[i].no_history.is_finite(), i == 9);
  }
  const auto high = threshold_curve(10, 0.7);
  EXPECT_NEAR(high.rows[0].truthful_history, 1.0, 1e-12);
  for (std::size_t i = 1; i < 10; ++i) EXPECT_NEAR(high.rows[i].truthful_history, 1.0 / 1.4, 1e-12);
  const auto two = threshold_curve(2, 0.5);
  EXPECT_NEAR(two.rows[1].no_history.value(), 3.0, 1e-12);
}

TEST(SinglePlayerGame, RejectsInvalidParameters) {
  const auto m = SignalModel::bernoulli(0.5, 1.0);
  EXPECT_THROW(SinglePlayerGame(1, 1.0, m), ValidationError);
  EXPECT_THROW(SinglePlayerGame(2, -0.1, m), ValidationError);
  EXPECT_NO_THROW(SinglePlayerGame(2, 0.0, m));
}

}  // namespace
}  // namespace flux
