#include <gtest/gtest.h>

#include "flux/common.hpp"
#include "flux/policy.hpp"

namespace flux {
namespace {

TEST(History, PriorAndNone) {
  EXPECT_TRUE(History::none().is_none());
  EXPECT_EQ(History::prior(0.5).value(), 0.5);
  EXPECT_THROW(History::prior(-1.0), ValidationError);
  EXPECT_EQ(to_string(History::none()), "none");
}

TEST(ReportGrid, Validation) {
  EXPECT_THROW(ReportGrid({0.0}), ValidationError);
  EXPECT_THROW(ReportGrid({0.1, 1.0}), ValidationError);
  EXPECT_THROW(ReportGrid({0.0, 0.5, 0.5, 1.0}), ValidationError);
  EXPECT_THROW(ReportGrid::evenly_spaced(1.0, 1), ValidationError);
  const auto g = ReportGrid::evenly_spaced(2.0, 5);
  EXPECT_EQ(g.size(), 5u);
  EXPECT_EQ(g.gross(), 2.0);
  EXPECT_EQ(g[2], 1.0);
  EXPECT_EQ(g.index_of(1.5), 3u);
  EXPECT_FALSE(g.index_of(1.2).has_value());
}

TEST(Policy, SetAndReport) {
  Policy p(ReportGrid::binary(1.0), 3);
  p.set(3, std::nullopt, 0, 1);
  p.set(2, 1, 0, 0);
  EXPECT_EQ(p.report(3, History::none(), 0.0), 1.0);
  EXPECT_EQ(p.report(2, History::prior(1.0), 0.0), 0.0);
  EXPECT_THROW(p.report(2, History::prior(0.0), 0.0), PolicyError);
  EXPECT_THROW(p.report(2, History::none(), 0.0), PolicyError);
  EXPECT_THROW(p.report(3, History::none(), 0.3), PolicyError);
  EXPECT_THROW(p.set(2, 0, 0, 2), PolicyError);
  EXPECT_THROW(p.set(4, std::nullopt, 0, 0), PolicyError);
}

TEST(Policy, EntriesOrderedByRoundsLeftDescending) {
  Policy p(ReportGrid::binary(1.0), 2);
  p.set(1, 0, 1, 1);
  p.set(2, std::nullopt, 0, 0);
  const auto e = p.entries();
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].rounds_left, 2);
  EXPECT_TRUE(e[0].history.is_none());
  EXPECT_EQ(e[1].rounds_left, 1);
  EXPECT_EQ(e[1].history, History::prior(0.0));
}

TEST(ValueTable, ZeroRoundsLeftIsFree) {
  ValueTable v(ReportGrid::binary(1.0), 2);
  v.set(2, std::nullopt, 1.5);
  v.set(1, 1, 0.25);
  EXPECT_EQ(v.root(), 1.5);
  EXPECT_EQ(v.value(1, History::prior(1.0)), 0.25);
  EXPECT_EQ(v.value(0, 0), 0.0);
}

}  // namespace
}  // namespace flux
