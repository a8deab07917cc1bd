#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "flux/multi_player.hpp"
#include "flux/policy.hpp"
#include "flux/single_player.hpp"

namespace flux {

enum class BasicStrategy { HonestTillEnd, LyingTillEnd, LyingTillBusted };

/// Decision table of a basic strategy on any grid: honest reports D, lying
/// reports the signal itself, lying-till-busted reports the signal until it
/// first equals D and D from then on.
Policy basic_policy(BasicStrategy strategy, const ReportGrid& grid, int rounds);

/// One player's move in one round. round_chrono counts from 1 (the first
/// round played); rounds_left = T - round_chrono + 1.
struct TraceRow {
  int round_chrono;
  int rounds_left;
  int player;
  double signal;
  double report;
  double regular_payment;
  double penalty_payment;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

enum class GameKind { Single, Multi };

/// A played game with everything needed to recompute its payments.
struct GameTrace {
  GameKind kind = GameKind::Single;
  std::uint64_t seed = 0;
  int players = 1;
  int rounds = 0;
  double rate = 0.0;
  double gross = 0.0;
  double overhead = 0.0;  ///< multi-player only
  std::string model;
  std::vector<TraceRow> rows;  ///< chronological, players in index order

  double total_cost(int player) const;

  friend bool operator==(const GameTrace&, const GameTrace&) = default;
};

/// Plays one game with signals drawn from the stream derived from `seed`.
/// Throws PolicyError when a policy is undefined at a reached state or
/// reports below its signal.
GameTrace run_game(const SinglePlayerGame& game, const Policy& policy,
                   std::uint64_t seed);
GameTrace run_game(const MultiPlayerGame& game, std::span<const PlayerPolicy> policies,
                   std::uint64_t seed);

struct CostSummary {
  std::vector<double> mean;            ///< per player
  std::vector<double> standard_error;  ///< sample stddev / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct MonteCarloOptions {
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Trial i uses the stream derived from (seed, i), so the summary is the same
/// for any thread count.
CostSummary monte_carlo(const SinglePlayerGame& game, const Policy& policy,
                        std::uint64_t trials, std::uint64_t seed,
                        const MonteCarloOptions& options = {});
CostSummary monte_carlo(const MultiPlayerGame& game,
                        std::span<const PlayerPolicy> policies, std::uint64_t trials,
                        std::uint64_t seed, const MonteCarloOptions& options = {});

struct TraceCheck {
  bool ok = true;
  std::vector<std::string> diagnostics;
};

/// Recomputes every payment from the reports and checks the trace invariants.
TraceCheck verify_trace(const GameTrace& trace);

/// CSV with a leading '#' block holding the seed and parameters.
void write_trace_csv(const GameTrace& trace, std::ostream& out);

}  // namespace flux
