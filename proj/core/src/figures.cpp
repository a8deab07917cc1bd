#include "flux/figures.hpp"

#include <fstream>
#include <limits>
#include <ostream>

#include "flux/common.hpp"
#include "flux/multi_player.hpp"
#include "flux/single_player.hpp"

namespace flux {
namespace {

constexpr int kCurveRounds = 10;

FigureTable curve_table(double p, const std::string& label) {
  FigureTable table;
  table.comments = {label + ": critical thresholds per round",
                    "T=" + std::to_string(kCurveRounds) + " p=" + format_number(p) +
                        " (T chosen for these data files)",
                    "no_history is finite only in the first round (rounds_left = T)"};
  table.columns = {"rounds_left", "no_history", "truthful_history"};
  for (const auto& row : threshold_curve(kCurveRounds, p).rows) {
    table.rows.push_back({static_cast<double>(row.rounds_left),
                          row.no_history.is_finite()
                              ? row.no_history.value()
                              : std::numeric_limits<double>::infinity(),
                          row.truthful_history});
  }
  return table;
}

FigureTable equilibrium_table() {
  constexpr int n = 20;
  constexpr double C = 20.0;
  constexpr double D = 1.0;
  const double p_low = 1.0 / 3.0;
  const double p_high = 2.0 / 3.0;
  FigureTable table;
  table.comments = {"fig4: penalty thresholds for truthful NE and DSE",
                    "n=20 C=20 D=1; columns at p=1/3 and p=2/3"};
  table.columns = {"T", "ne_p1_3", "dse_p1_3", "ne_p2_3", "dse_p2_3"};
  for (int t = 2; t <= 30; ++t) {
    table.rows.push_back({static_cast<double>(t), ne_threshold(t, p_low, n, C, D),
                          dse_threshold(t, p_low, n, C, D), ne_threshold(t, p_high, n, C, D),
                          dse_threshold(t, p_high, n, C, D)});
  }
  return table;
}

}  // namespace

FigureId parse_figure_id(const std::string& text) {
  if (text == "fig2") return FigureId::Fig2;
  if (text == "fig3") return FigureId::Fig3;
  if (text == "fig4") return FigureId::Fig4;
  throw ValidationError("which: expected fig2, fig3 or fig4, got '" + text + "'");
}

std::string to_string(FigureId id) {
  switch (id) {
    case FigureId::Fig2: return "fig2";
    case FigureId::Fig3: return "fig3";
    case FigureId::Fig4: return "fig4";
  }
  return "?";
}

FigureTable figure_data(FigureId id) {
  switch (id) {
    case FigureId::Fig2: return curve_table(0.3, "fig2");
    case FigureId::Fig3: return curve_table(0.7, "fig3");
    case FigureId::Fig4: return equilibrium_table();
  }
  throw std::logic_error("figure_data: unknown figure");
}

void write_figure_csv(const FigureTable& table, std::ostream& out) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      // The first column is always an integer index.
      out << (i ? "," : "") << (i == 0 ? std::to_string(static_cast<long>(row[i]))
                                       : format_number(row[i]));
    }
    out << '\n';
  }
}

void emit_figure(FigureId id, const std::filesystem::path& out) {
  std::ofstream file(out, std::ios::binary);
  if (!file) throw ValidationError("out: cannot open " + out.string() + " for writing");
  write_figure_csv(figure_data(id), file);
  if (!file) throw ValidationError("out: failed writing " + out.string());
}

}  // namespace flux
