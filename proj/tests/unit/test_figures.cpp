#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "flux/common.hpp"
#include "flux/figures.hpp"

namespace flux {
namespace {

TEST(Figures, ParseIds) {
  EXPECT_EQ(parse_figure_id("fig3"), FigureId::Fig3);
  EXPECT_EQ(to_string(FigureId::Fig4), "fig4");
  EXPECT_THROW(parse_figure_id("fig9"), ValidationError);
}

TEST(Figures, CurveTables) {
  const auto low = figure_data(FigureId::Fig2);
  ASSERT_EQ(low.rows.size(), 10u);
  EXPECT_EQ(low.columns, (std::vector<std::string>{"rounds_left", "no_history", "truthful_history"}));
  EXPECT_NEAR(low.rows[0][2], 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(low.rows[0][1]));
  EXPECT_TRUE(std::isfinite(low.rows[9][1]));
  const auto high = figure_data(FigureId::Fig3);
  EXPECT_NEAR(high.rows[4][2], 0.714285714, 1e-9);
}

TEST(Figures, EquilibriumTable) {
  const auto t = figure_data(FigureId::Fig4);
  ASSERT_EQ(t.rows.size(), 29u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    EXPECT_EQ(row[0], static_cast<double>(i + 2));
    EXPECT_GE(row[2], row[1]);
    EXPECT_GE(row[4], row[3]);
    if (i > 0) {
      for (std::size_t c = 1; c < 5; ++c) EXPECT_LT(row[c], t.rows[i - 1][c]);
    }
  }
  EXPECT_NEAR(t.rows[8][3], 1.5000508078447312, 1e-12);
  EXPECT_NEAR(t.rows[8][4], 2.25007620983115, 1e-11);
}

TEST(Figures, CsvFormatting) {
  std::ostringstream out;
  write_figure_csv(figure_data(FigureId::Fig3), out);
  const auto text = out.str();
  EXPECT_NE(text.find("rounds_left,no_history,truthful_history\n1,inf,1.00000000\n2,inf,0.714285714\n"), std::string::npos);
  EXPECT_THROW(emit_figure(FigureId::Fig2, "/nonexistent-dir/x.csv"), ValidationError);
}

}  // namespace
}  // namespace flux
