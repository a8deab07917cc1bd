#include "flux/dp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace flux {
namespace {

struct GridSignal {
  std::size_t index;
  double probability;
};

std::vector<GridSignal> map_support(const SignalModel& model,
                                    const ReportGrid& grid) {
  if (std::abs(grid.gross() - model.gross()) > 1e-12 * model.gross()) {
    throw ValidationError("grid: top level must equal the gross consumption D");
  }
  std::vector<GridSignal> out;
  for (const auto& pt : model.finite_support()) {
    if (pt.probability <= 0.0) continue;
    const auto idx = grid.index_of(pt.value);
    if (!idx) {
      throw ValidationError("grid: signal support point " +
                            format_number(pt.value) +
                            " is not a report level (grid/support mismatch)");
    }
    out.push_back({*idx, pt.probability});
  }
  return out;
}

}  // namespace

std::uint64_t single_state_count(int rounds, std::size_t grid_size,
                                 std::size_t support_size) {
  const auto histories =
      1 + static_cast<std::uint64_t>(rounds - 1) * static_cast<std::uint64_t>(grid_size);
  return histories * static_cast<std::uint64_t>(support_size);
}

SingleSolution solve_single(const SinglePlayerGame& game, const ReportGrid& grid,
                            const SolveOptions& options) {
  const auto signals = map_support(game.model(), grid);
  const int rounds = game.rounds();
  const std::uint64_t states = single_state_count(rounds, grid.size(), signals.size());
  if (states > options.state_cap) {
    throw CapacityError("solve_single: " + std::to_string(states) +
                        " states (T=" + std::to_string(rounds) +
                        ", grid=" + std::to_string(grid.size()) +
                        ", support=" + std::to_string(signals.size()) +
                        ") exceed the cap of " + std::to_string(options.state_cap) +
                        "; raise FLUX_STATE_CAP or coarsen the grid");
  }

  const double rate = game.rate();
  const auto& levels = grid.levels();
  const std::size_t g = grid.size();
  SingleSolution sol{Policy(grid, rounds), ValueTable(grid, rounds)};

  for (int t = 1; t <= rounds; ++t) {
    const std::size_t hist_count = (t == rounds) ? 1 : g;
    for (std::size_t h = 0; h < hist_count; ++h) {
      const std::optional<std::size_t> hist =
          (t == rounds) ? std::nullopt : std::optional<std::size_t>(h);
      double expected = 0.0;
      for (const auto& sig : signals) {
        std::size_t best_report = g - 1;
        double best_cost = std::numeric_limits<double>::infinity();
        // Descending so that near-ties keep the larger report.
        for (std::size_t j = g; j-- > sig.index;) {
          double cost = levels[j] + sol.values.value(t - 1, j);
          if (hist) cost += rate * std::abs(levels[j] - levels[*hist]);
          if (cost < best_cost - options.tie_tolerance) {
            best_cost = cost;
            best_report = j;
          }
        }
        sol.policy.set(t, hist, sig.index, best_report);
        expected += sig.probability * best_cost;
      }
      sol.values.set(t, hist, expected);
    }
  }
  return sol;
}

double bisect_threshold(int rounds, double p, double gross,
                        const PolicyPredicate& predicate, double lo, double hi,
                        double tol, const SolveOptions& options) {
  const SignalModel model = SignalModel::bernoulli(p, gross);
  const ReportGrid grid = ReportGrid::binary(gross);
  auto probe = [&](double rate) {
    return predicate(solve_single(SinglePlayerGame(rounds, rate, model), grid,
                                  options)
                         .policy);
  };
  return bisect_monotone(probe, lo, hi, tol);
}

std::vector<ReachedState> reachable_states(const Policy& policy) {
  const int rounds = policy.rounds();
  const std::size_t g = policy.grid().size();
  std::vector<ReachedState> out{{rounds, std::nullopt}};
  std::set<std::size_t> frontier;
  for (std::size_t s = 0; s < g; ++s) {
    if (auto r = policy.report_index(rounds, std::nullopt, s)) frontier.insert(*r);
  }
  for (int t = rounds - 1; t >= 1; --t) {
    std::set<std::size_t> next;
    for (std::size_t h : frontier) {
      out.push_back({t, h});
      for (std::size_t s = 0; s < g; ++s) {
        if (auto r = policy.report_index(t, h, s)) next.insert(*r);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

double min_reachable_report(const Policy& policy) {
  const std::size_t g = policy.grid().size();
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& st : reachable_states(policy)) {
    for (std::size_t s = 0; s < g; ++s) {
      if (auto r = policy.report_index(st.rounds_left, st.history, s)) {
        lowest = std::min(lowest, policy.grid()[*r]);
      }
    }
  }
  return lowest;
}

bool is_honest_till_end(const Policy& policy) {
  return min_reachable_report(policy) >= policy.grid().gross();
}

}  // namespace flux
