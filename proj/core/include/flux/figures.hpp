#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace flux {

enum class FigureId { Fig2, Fig3, Fig4 };

/// Parses "fig2" / "fig3" / "fig4"; throws ValidationError naming `which`.
FigureId parse_figure_id(const std::string& text);
std::string to_string(FigureId id);

/// Figure data before formatting. Unbounded thresholds are +infinity.
struct FigureTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// fig2 / fig3: threshold curve at T=10 with p=0.3 / p=0.7.
/// fig4: T=2..30 with NE and DSE rates at p=1/3 and p=2/3, n=20, C=20, D=1.
FigureTable figure_data(FigureId id);

void write_figure_csv(const FigureTable& table, std::ostream& out);

/// Writes the CSV to `out`; throws ValidationError when the path is not
/// writable.
void emit_figure(FigureId id, const std::filesystem::path& out);

}  // namespace flux
