#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flux {

/// The previous round's report, or nothing in the first round. Rounds are
/// counted by how many remain: round T is played first, round 1 last.
class History {
 public:
  static History none() { return History{}; }
  static History prior(double report);

  bool is_none() const { return !report_.has_value(); }
  /// Throws std::logic_error when there is no prior report.
  double value() const;

  friend bool operator==(const History&, const History&) = default;

 private:
  std::optional<double> report_;
};

std::string to_string(const History& h);

/// Allowed report values: strictly increasing, always containing 0 and D.
class ReportGrid {
 public:
  explicit ReportGrid(std::vector<double> levels);
  static ReportGrid binary(double gross);
  static ReportGrid evenly_spaced(double gross, int levels);

  const std::vector<double>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  double gross() const { return levels_.back(); }
  double operator[](std::size_t i) const { return levels_[i]; }
  /// Index of the level equal to `value` (within 1e-12 * D).
  std::optional<std::size_t> index_of(double value) const;

  friend bool operator==(const ReportGrid&, const ReportGrid&) = default;

 private:
  std::vector<double> levels_;
};

/// Deterministic decision table (rounds_left, history, signal) -> report, all
/// values on a ReportGrid. Entries never written stay undefined.
class Policy {
 public:
  struct Entry {
    int rounds_left;
    History history;
    double signal;
    double report;
  };

  Policy(ReportGrid grid, int rounds);

  int rounds() const { return rounds_; }
  const ReportGrid& grid() const { return grid_; }

  /// history_index is ignored at rounds_left == rounds (no history there).
  void set(int rounds_left, std::optional<std::size_t> history_index,
           std::size_t signal_index, std::size_t report_index);
  std::optional<std::size_t> report_index(
      int rounds_left, std::optional<std::size_t> history_index,
      std::size_t signal_index) const;

  /// Report for real-valued inputs; throws PolicyError when the state is not
  /// on the grid or was never defined.
  double report(int rounds_left, const History& history, double signal) const;

  /// Every defined entry, ordered by rounds_left descending, then history,
  /// then signal.
  std::vector<Entry> entries() const;

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  std::size_t slot(int rounds_left, std::optional<std::size_t> history_index,
                   std::size_t signal_index) const;

  ReportGrid grid_;
  int rounds_;
  std::vector<std::int32_t> table_;  // -1 = undefined
};

/// Optimal expected cost-to-go per (rounds_left, history). OptCost(0, .) = 0.
class ValueTable {
 public:
  ValueTable(ReportGrid grid, int rounds);

  double value(int rounds_left, std::optional<std::size_t> history_index) const;
  void set(int rounds_left, std::optional<std::size_t> history_index, double v);
  double value(int rounds_left, const History& history) const;
  /// Expected total cost of the whole game from the first round.
  double root() const { return value(rounds_, std::nullopt); }

  int rounds() const { return rounds_; }
  const ReportGrid& grid() const { return grid_; }

 private:
  std::size_t slot(int rounds_left, std::optional<std::size_t> history_index) const;

  ReportGrid grid_;
  int rounds_;
  std::vector<double> values_;
};

}  // namespace flux
