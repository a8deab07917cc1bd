#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "flux/multi_player.hpp"

namespace flux {
namespace {

MultiPlayerGame game(int n, double c, int t, double r, double p = 0.5) {
  return MultiPlayerGame(n, c, t, r, SignalModel::bernoulli(p, 1.0));
}

std::vector<StationaryPolicy> honest_opponents(int n, int t) {
  return std::vector<StationaryPolicy>(static_cast<std::size_t>(n - 1),
                                       StationaryPolicy::honest_till_end(t, n));
}

TEST(MultiPlayerGame, Validation) {
  EXPECT_THROW(game(1, 1.0, 2, 1.0), ValidationError);
  EXPECT_THROW(game(2, 1.9, 2, 1.0), ValidationError);
  EXPECT_THROW(game(2, 2.0, 1, 1.0), ValidationError);
  EXPECT_THROW(game(2, 2.0, 2, -1.0), ValidationError);
  EXPECT_NO_THROW(game(2, 2.0, 2, 0.0));
  EXPECT_EQ(game(2, 2.0, 2, 1.0).with_rate(3.5).rate(), 3.5);
}

TEST(GroupHistory, AllOrNothing) {
  EXPECT_TRUE(GroupHistory::first_round(3).is_first_round());
  EXPECT_THROW(GroupHistory({History::none(), History::prior(1.0)}), ValidationError);
  const GroupHistory h({History::prior(0.0), History::prior(1.0)});
  EXPECT_FALSE(h.is_first_round());
  EXPECT_EQ(h[1].value(), 1.0);
}

TEST(CostShare, Examples) {
  const std::array<double, 2> a{1.0, 1.0};
  EXPECT_EQ(cost_share(a, 2.0), (std::vector<double>{1.0, 1.0}));
  const std::array<double, 2> b{0.0, 1.0};
  EXPECT_EQ(cost_share(b, 3.0), (std::vector<double>{0.0, 3.0}));
  const std::array<double, 2> z{0.0, 0.0};
  EXPECT_EQ(cost_share(z, 4.0), (std::vector<double>{2.0, 2.0}));
  const std::array<double, 2> d{1.0, 3.0};
  EXPECT_EQ(cost_share(d, 8.0), (std::vector<double>{2.0, 6.0}));
  const std::array<double, 2> bad{-1.0, 3.0};
  EXPECT_THROW(cost_share(bad, 8.0), ValidationError);
}

TEST(CostShare, SumsToOverhead) {
  const std::array<double, 5> r{0.3, 0.0, 1.0, 0.71, 0.25};
  double total = 0.0;
  for (double s : cost_share(r, 7.3)) total += s;
  EXPECT_NEAR(total, 7.3, 1e-12);
}

TEST(Thresholds, Examples) {
  EXPECT_NEAR(ne_threshold(2, 0.5, 2, 2.0, 1.0), 3.0, 1e-12);
  EXPECT_NEAR(ne_threshold(2, 0.5, 2, 4.0, 1.0), 6.0, 1e-12);
  EXPECT_NEAR(dse_threshold(2, 0.5, 2, 2.0, 1.0), 3.0, 1e-12);
  EXPECT_NEAR(dse_threshold(2, 0.5, 3, 3.0, 1.0), 4.5, 1e-12);
  EXPECT_NEAR(ne_threshold(10, 2.0 / 3.0, 20, 20.0, 1.0), 1.5000508078447312, 1e-12);
  EXPECT_NEAR(dse_threshold(10, 2.0 / 3.0, 20, 20.0, 1.0), 2.25007620983115, 1e-11);
}

TEST(Thresholds, DominantAtLeastNashAndDecreasingInRounds) {
  for (double p : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
    for (int n : {2, 5, 20}) {
      double prev = INFINITY;
      for (int t = 2; t <= 30; ++t) {
        const double ne = ne_threshold(t, p, n, 1.5 * n, 1.0);
        EXPECT_GE(dse_threshold(t, p, n, 1.5 * n, 1.0), ne * (1.0 - 1e-12));
        EXPECT_LT(ne, prev);
        prev = ne;
      }
    }
  }
}

TEST(AlphaThresholdMulti, UniformExamples) {
  const auto m = SignalModel::uniform(1.0);
  const auto ne = alpha_threshold_multi(EquilibriumKind::Nash, 2, m, AlphaLevel(0.5), 2, 2.0, 1.0);
  const auto dse =
      alpha_threshold_multi(EquilibriumKind::Dominant, 2, m, AlphaLevel(0.5), 2, 2.0, 1.0);
  EXPECT_NEAR(ne.value(), 6.0, 1e-12);
  EXPECT_NEAR(dse.value(), 9.0, 1e-12);
  EXPECT_FALSE(alpha_threshold_multi(EquilibriumKind::Nash, 2, m, AlphaLevel(1.0), 2, 2.0, 1.0)
                   .is_finite());
}

TEST(DeltaEcBound, Examples) {
  EXPECT_NEAR(delta_ec_bound(1, 0.5, 2, 2.0, 1.0, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(delta_ec_bound(2, 0.5, 2, 2.0, 1.0, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(delta_ec_bound(1, 0.5, 2, 2.0, 1.0, 0.0), 0.5, 1e-12);
}

TEST(StationaryPolicy, BitEncodings) {
  EXPECT_EQ(StationaryPolicy::own_state_bits(3), 5);
  EXPECT_EQ(StationaryPolicy::from_own_state_bits(3, 2, 0),
            StationaryPolicy::lying_till_end(3, 2));
  EXPECT_EQ(StationaryPolicy::from_own_state_bits(3, 2, 31),
            StationaryPolicy::honest_till_end(3, 2));
  EXPECT_EQ(StationaryPolicy::from_own_state_bits(3, 2, 0b10100),
            StationaryPolicy::lying_till_busted(3, 2));
  EXPECT_EQ(StationaryPolicy::group_reactive_bits(3, 2), 9);
}

TEST(StationaryPolicy, SlotValidation) {
  StationaryPolicy s(3, 2);
  EXPECT_THROW(s.set(2, HistoryLevel::None, 0, true), PolicyError);
  EXPECT_THROW(s.set(2, HistoryLevel::Zero, 2, true), PolicyError);
  EXPECT_NO_THROW(s.set(3, HistoryLevel::None, 0, false));
  EXPECT_FALSE(s.reports_full(3, HistoryLevel::None, 0));
}

TEST(Decide, StationaryRules) {
  const PlayerPolicy lte = StationaryPolicy::lying_till_end(2, 2);
  const auto first = GroupHistory::first_round(2);
  EXPECT_EQ(decide(lte, 2, 0, first, 0.0, 1.0), 0.0);
  EXPECT_EQ(decide(lte, 2, 0, first, 1.0, 1.0), 1.0);
  EXPECT_THROW(decide(lte, 2, 0, first, 0.5, 1.0), PolicyError);
  const GroupHistory later({History::prior(0.0), History::prior(1.0)});
  EXPECT_EQ(decide(lte, 1, 1, later, 0.0, 1.0), 0.0);
}

TEST(BestResponse, HonestOpponentsTwoRounds) {
  // Against an honest opponent with n=2, C=2: V(1, zero) = (1+r)/2,
  // V(1, full) = (1 + min(1, r))/2, first round as the better of the two.
  const auto opp = honest_opponents(2, 2);
  const std::array<HistoryLevel, 1> full{HistoryLevel::Full};
  for (double r : {0.0, 0.5, 2.0, 3.0, 5.0}) {
    const auto sol = best_response(game(2, 2.0, 2, r), 0, opp);
    const double v_zero = 0.5 * (1.0 + r);
    const double v_full = 0.5 + 0.5 * std::min(1.0, r);
    EXPECT_NEAR(sol.values.value(1, HistoryLevel::Zero, full), v_zero, 1e-12);
    EXPECT_NEAR(sol.values.value(1, HistoryLevel::Full, full), v_full, 1e-12);
    EXPECT_NEAR(sol.values.root(), 0.5 * (1.0 + v_full) + 0.5 * std::min(1.0 + v_full, v_zero),
                1e-12);
    EXPECT_NEAR(delta_ec(sol.values, 1, full), v_full - v_zero, 1e-12);
  }
}

TEST(BestResponse, MatchesEvaluateForHonestAboveThreshold) {
  const auto g = game(3, 3.0, 3, 3.0);
  const auto opp = honest_opponents(3, 3);
  const auto best = best_response(g, 0, opp);
  const auto honest = evaluate_policy(g, StationaryPolicy::honest_till_end(3, 3), opp);
  EXPECT_NEAR(best.values.root(), 3.0, 1e-12);
  EXPECT_NEAR(honest.root(), 3.0, 1e-12);
}

TEST(BestResponse, NeverWorseThanAnyOwnStatePolicy) {
  const auto g = game(2, 3.0, 3, 1.3, 0.4);
  const auto opp = std::vector<StationaryPolicy>{StationaryPolicy::lying_till_busted(3, 2)};
  const double best = best_response(g, 0, opp).values.root();
  for (std::uint64_t bits = 0; bits < (1u << StationaryPolicy::own_state_bits(3)); ++bits) {
    const auto own = StationaryPolicy::from_own_state_bits(3, 2, bits);
    EXPECT_LE(best, evaluate_policy(g, own, opp).root() + 1e-12);
  }
}

TEST(BestResponse, CapacityAndModelErrors) {
  const auto g = game(8, 8.0, 20, 1.0);
  MultiSolveOptions opts;
  opts.state_cap = 1000;
  EXPECT_THROW(best_response(g, 0, honest_opponents(8, 20), opts), CapacityError);
  const MultiPlayerGame u(2, 2.0, 2, 1.0, SignalModel::uniform(1.0));
  EXPECT_THROW(best_response(u, 0, honest_opponents(2, 2)), ValidationError);
  EXPECT_EQ(response_state_count(2, 2), (1u + 4u) * 4u);
}

TEST(CheckEquilibrium, NashSwitchesAtClosedForm) {
  const auto at = check_equilibrium(game(3, 3.0, 2, 3.0), EquilibriumKind::Nash);
  EXPECT_TRUE(at.holds);
  EXPECT_NEAR(at.threshold, 3.0, 1e-12);
  const auto below = check_equilibrium(game(3, 3.0, 2, 2.95), EquilibriumKind::Nash);
  EXPECT_FALSE(below.holds);
  ASSERT_TRUE(below.witness.has_value());
  EXPECT_EQ(below.witness->player, 0u);
  EXPECT_EQ(below.witness->rounds_left, 2);
  EXPECT_EQ(below.witness->round_chrono, 1);
  EXPECT_EQ(below.witness->report, 0.0);
  EXPECT_GT(below.witness->improvement, 0.0);
}

TEST(CheckEquilibrium, DominantSwitchesAtClosedForm) {
  EXPECT_TRUE(check_equilibrium(game(3, 3.0, 2, 4.5), EquilibriumKind::Dominant).holds);
  const auto below = check_equilibrium(game(3, 3.0, 2, 4.4), EquilibriumKind::Dominant);
  EXPECT_FALSE(below.holds);
  EXPECT_TRUE(below.witness.has_value());
  // Nash still holds there.
  EXPECT_TRUE(check_equilibrium(game(3, 3.0, 2, 4.4), EquilibriumKind::Nash).holds);
}

TEST(CheckEquilibrium, SwitchingRateBisection) {
  const auto g = game(2, 2.0, 3, 0.0, 0.4);
  const double found = equilibrium_switching_rate(g, EquilibriumKind::Nash, 0.0, 10.0, 1e-7);
  EXPECT_NEAR(found, ne_threshold(3, 0.4, 2, 2.0, 1.0), 1e-6);
}

TEST(CheckEquilibrium, GroupReactiveOpponentsNeedMore) {
  // Opponents that react to the responder's zero report can punish it, so the
  // wider family breaks the closed form for n=2, T=2, p=1/2.
  EquilibriumOptions wide;
  wide.family = OpponentFamily::GroupReactive;
  EXPECT_FALSE(check_equilibrium(game(2, 2.0, 2, 3.5), EquilibriumKind::Dominant, wide).holds);
  EXPECT_TRUE(check_equilibrium(game(2, 2.0, 2, 4.0), EquilibriumKind::Dominant, wide).holds);
  EXPECT_TRUE(check_equilibrium(game(2, 2.0, 2, 3.0), EquilibriumKind::Dominant).holds);
}

}  // namespace
}  // namespace flux
