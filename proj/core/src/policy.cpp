#include "flux/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "flux/common.hpp"

namespace flux {

History History::prior(double report) {
  if (!std::isfinite(report) || report < 0.0) {
    throw ValidationError("history: prior report must be a nonnegative real");
  }
  History h;
  h.report_ = report;
  return h;
}

double History::value() const {
  if (!report_) throw std::logic_error("history: no prior report");
  return *report_;
}

std::string to_string(const History& h) {
  return h.is_none() ? std::string("none") : format_number(h.value());
}

ReportGrid::ReportGrid(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2) {
    throw ValidationError("grid: needs at least the levels 0 and D");
  }
  if (levels_.front() != 0.0) throw ValidationError("grid: must start at 0");
  if (!(levels_.back() > 0.0) || !std::isfinite(levels_.back())) {
    throw ValidationError("grid: top level D must be a positive real");
  }
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (!(levels_[i] > levels_[i - 1])) {
      throw ValidationError("grid: levels must be strictly increasing");
    }
  }
}

ReportGrid ReportGrid::binary(double gross) { return ReportGrid({0.0, gross}); }

ReportGrid ReportGrid::evenly_spaced(double gross, int levels) {
  if (levels < 2) throw ValidationError("levels: need at least 2 levels");
  std::vector<double> v;
  for (int i = 0; i < levels; ++i) {
    v.push_back(i == levels - 1 ? gross
                                : gross * static_cast<double>(i) / (levels - 1));
  }
  return ReportGrid(std::move(v));
}

std::optional<std::size_t> ReportGrid::index_of(double value) const {
  const double tol = 1e-12 * gross();
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (std::abs(levels_[i] - value) <= tol) return i;
  }
  return std::nullopt;
}

Policy::Policy(ReportGrid grid, int rounds)
    : grid_(std::move(grid)), rounds_(rounds) {
  if (rounds < 1) throw ValidationError("T: policy needs at least one round");
  const std::size_t g = grid_.size();
  table_.assign((static_cast<std::size_t>(rounds - 1) * g + 1) * g, -1);
}

std::size_t Policy::slot(int rounds_left, std::optional<std::size_t> history_index,
                         std::size_t signal_index) const {
  const std::size_t g = grid_.size();
  if (rounds_left < 1 || rounds_left > rounds_ || signal_index >= g) {
    throw PolicyError("policy: state outside the table (rounds_left=" +
                      std::to_string(rounds_left) + ")");
  }
  if (rounds_left == rounds_) return signal_index;
  if (!history_index || *history_index >= g) {
    throw PolicyError("policy: rounds_left=" + std::to_string(rounds_left) +
                      " requires a history on the grid");
  }
  const auto row = static_cast<std::size_t>(rounds_left - 1) * g + *history_index;
  return g + row * g + signal_index;
}

void Policy::set(int rounds_left, std::optional<std::size_t> history_index,
                 std::size_t signal_index, std::size_t report_index) {
  if (report_index >= grid_.size()) throw PolicyError("policy: report off grid");
  table_[slot(rounds_left, history_index, signal_index)] =
      static_cast<std::int32_t>(report_index);
}

std::optional<std::size_t> Policy::report_index(
    int rounds_left, std::optional<std::size_t> history_index,
    std::size_t signal_index) const {
  const std::int32_t v = table_[slot(rounds_left, history_index, signal_index)];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

double Policy::report(int rounds_left, const History& history,
                      double signal) const {
  const auto s = grid_.index_of(signal);
  if (!s) {
    throw PolicyError("policy: signal " + format_number(signal) +
                      " is not a grid level");
  }
  std::optional<std::size_t> h;
  if (rounds_left != rounds_) {
    if (history.is_none()) {
      throw PolicyError("policy: missing history at rounds_left=" +
                        std::to_string(rounds_left));
    }
    h = grid_.index_of(history.value());
    if (!h) {
      throw PolicyError("policy: history " + format_number(history.value()) +
                        " is not a grid level");
    }
  }
  const auto r = report_index(rounds_left, h, *s);
  if (!r) {
    throw PolicyError("policy: undefined at rounds_left=" +
                      std::to_string(rounds_left) + ", history=" +
                      to_string(history) + ", signal=" + format_number(signal));
  }
  return grid_[*r];
}

std::vector<Policy::Entry> Policy::entries() const {
  std::vector<Entry> out;
  const std::size_t g = grid_.size();
  for (int t = rounds_; t >= 1; --t) {
    const std::size_t hist_count = (t == rounds_) ? 1 : g;
    for (std::size_t h = 0; h < hist_count; ++h) {
      const std::optional<std::size_t> hi =
          (t == rounds_) ? std::nullopt : std::optional<std::size_t>(h);
      for (std::size_t s = 0; s < g; ++s) {
        if (auto r = report_index(t, hi, s)) {
          out.push_back({t, hi ? History::prior(grid_[*hi]) : History::none(),
                         grid_[s], grid_[*r]});
        }
      }
    }
  }
  return out;
}

ValueTable::ValueTable(ReportGrid grid, int rounds)
    : grid_(std::move(grid)), rounds_(rounds) {
  if (rounds < 1) throw ValidationError("T: value table needs at least one round");
  values_.assign(static_cast<std::size_t>(rounds) * grid_.size() + 1, 0.0);
}

std::size_t ValueTable::slot(int rounds_left,
                             std::optional<std::size_t> history_index) const {
  if (rounds_left < 0 || rounds_left > rounds_) {
    throw std::out_of_range("value table: rounds_left out of range");
  }
  if (rounds_left == rounds_) return 0;
  if (!history_index || *history_index >= grid_.size()) {
    throw std::out_of_range("value table: history must be a grid index");
  }
  return 1 + static_cast<std::size_t>(rounds_left) * grid_.size() + *history_index;
}

double ValueTable::value(int rounds_left,
                         std::optional<std::size_t> history_index) const {
  return values_[slot(rounds_left, history_index)];
}

void ValueTable::set(int rounds_left, std::optional<std::size_t> history_index,
                     double v) {
  values_[slot(rounds_left, history_index)] = v;
}

double ValueTable::value(int rounds_left, const History& history) const {
  if (rounds_left == rounds_) return value(rounds_left, std::nullopt);
  if (history.is_none()) throw std::out_of_range("value table: missing history");
  const auto h = grid_.index_of(history.value());
  if (!h) throw std::out_of_range("value table: history not on grid");
  return value(rounds_left, h);
}

}  // namespace flux
