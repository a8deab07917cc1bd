#include "flux/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace flux {
namespace {

constexpr double kPaymentTolerance = 1e-12;

// Plays one single-player game, calling emit(row) for every move.
template <typename Emit>
void play(const SinglePlayerGame& game, const Policy& policy, RandomStream& stream,
          Emit&& emit) {
  const int rounds = game.rounds();
  History history = History::none();
  for (int t = rounds; t >= 1; --t) {
    const double y = sample(game.model(), stream).value;
    const double b = policy.report(t, history, y);
    if (b < y - kPaymentTolerance * game.gross()) {
      throw PolicyError("policy reports " + format_number(b) + " below signal " +
                        format_number(y) + " at rounds_left=" + std::to_string(t));
    }
    const double penalty = history.is_none() ? 0.0 : game.rate() * std::abs(b - history.value());
    emit(TraceRow{rounds - t + 1, t, 0, y, b, b, penalty});
    history = History::prior(b);
  }
}

template <typename Emit>
void play(const MultiPlayerGame& game, std::span<const PlayerPolicy> policies,
          RandomStream& stream, Emit&& emit) {
  const int rounds = game.rounds();
  const auto n = static_cast<std::size_t>(game.players());
  GroupHistory history = GroupHistory::first_round(game.players());
  std::vector<double> signals(n), reports(n);
  std::vector<History> next(n);
  for (int t = rounds; t >= 1; --t) {
    for (std::size_t i = 0; i < n; ++i) signals[i] = sample(game.model(), stream).value;
    for (std::size_t i = 0; i < n; ++i) {
      reports[i] = decide(policies[i], t, i, history, signals[i], game.gross());
      if (reports[i] < signals[i] - kPaymentTolerance * game.gross()) {
        throw PolicyError("player " + std::to_string(i) + " reports below its signal");
      }
    }
    const auto shares = cost_share(reports, game.overhead());
    for (std::size_t i = 0; i < n; ++i) {
      const double penalty = history.is_first_round()
                                 ? 0.0
                                 : game.rate() * std::abs(reports[i] - history[i].value());
      emit(TraceRow{rounds - t + 1, t, static_cast<int>(i), signals[i], reports[i],
                    shares[i], penalty});
      next[i] = History::prior(reports[i]);
    }
    history = GroupHistory(next);
  }
}

void check_multi_policies(const MultiPlayerGame& game,
                          std::span<const PlayerPolicy> policies) {
  if (policies.size() != static_cast<std::size_t>(game.players())) {
    throw ValidationError("policies: expected one policy per player");
  }
}

template <typename Game, typename Policies>
CostSummary run_trials(const Game& game, const Policies& policies, int players,
                       std::uint64_t trials, std::uint64_t seed,
                       const MonteCarloOptions& options) {
  if (trials < 1) throw ValidationError("trials: must be at least 1");
  const auto n = static_cast<std::size_t>(players);
  std::vector<double> costs(n * trials, 0.0);

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end; ++k) {
      auto stream = RandomStream::derive(seed, stream_purpose::kMonteCarlo, k);
      play(game, policies, stream, [&](const TraceRow& row) {
        costs[static_cast<std::size_t>(row.player) * trials + k] +=
            row.regular_payment + row.penalty_payment;
      });
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, trials));
  if (threads == 1) {
    work(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t begin = std::min(trials, w * chunk);
      const std::uint64_t end = std::min(trials, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  CostSummary out;
  out.trials = trials;
  out.seed = seed;
  std::vector<double> dev(trials);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> row(costs.data() + i * trials, trials);
    if (std::all_of(row.begin(), row.end(), [&](double c) { return c == row.front(); })) {
      out.mean.push_back(row.front());
      out.standard_error.push_back(0.0);
      continue;
    }
    const double mean = pairwise_sum(row) / static_cast<double>(trials);
    for (std::uint64_t k = 0; k < trials; ++k) dev[k] = (row[k] - mean) * (row[k] - mean);
    const double var = pairwise_sum(dev) / static_cast<double>(trials - 1);
    out.mean.push_back(mean);
    out.standard_error.push_back(std::sqrt(var / static_cast<double>(trials)));
  }
  return out;
}

bool close(double a, double b) {
  return std::abs(a - b) <= kPaymentTolerance * std::max(1.0, std::abs(b));
}

}  // namespace

Policy basic_policy(BasicStrategy strategy, const ReportGrid& grid, int rounds) {
  Policy policy(grid, rounds);
  const std::size_t top = grid.size() - 1;
  auto choose = [&](std::optional<std::size_t> h, std::size_t s) {
    switch (strategy) {
      case BasicStrategy::HonestTillEnd: return top;
      case BasicStrategy::LyingTillEnd: return s;
      case BasicStrategy::LyingTillBusted: return (h && *h == top) ? top : s;
    }
    return top;
  };
  for (std::size_t s = 0; s < grid.size(); ++s) {
    policy.set(rounds, std::nullopt, s, choose(std::nullopt, s));
  }
  for (int t = rounds - 1; t >= 1; --t) {
    for (std::size_t h = 0; h < grid.size(); ++h) {
      for (std::size_t s = 0; s < grid.size(); ++s) policy.set(t, h, s, choose(h, s));
    }
  }
  return policy;
}

double GameTrace::total_cost(int player) const {
  double total = 0.0;
  for (const auto& row : rows) {
    if (row.player == player) total += row.regular_payment + row.penalty_payment;
  }
  return total;
}

GameTrace run_game(const SinglePlayerGame& game, const Policy& policy,
                   std::uint64_t seed) {
  GameTrace trace{GameKind::Single, seed, 1, game.rounds(), game.rate(), game.gross(),
                  0.0, game.model().describe(), {}};
  auto stream = RandomStream::derive(seed, stream_purpose::kTrace, 0);
  play(game, policy, stream, [&](const TraceRow& row) { trace.rows.push_back(row); });
  return trace;
}

GameTrace run_game(const MultiPlayerGame& game, std::span<const PlayerPolicy> policies,
                   std::uint64_t seed) {
  check_multi_policies(game, policies);
  GameTrace trace{GameKind::Multi, seed, game.players(), game.rounds(), game.rate(),
                  game.gross(), game.overhead(), game.model().describe(), {}};
  auto stream = RandomStream::derive(seed, stream_purpose::kTrace, 0);
  play(game, policies, stream, [&](const TraceRow& row) { trace.rows.push_back(row); });
  return trace;
}

CostSummary monte_carlo(const SinglePlayerGame& game, const Policy& policy,
                        std::uint64_t trials, std::uint64_t seed,
                        const MonteCarloOptions& options) {
  return run_trials(game, policy, 1, trials, seed, options);
}

CostSummary monte_carlo(const MultiPlayerGame& game,
                        std::span<const PlayerPolicy> policies, std::uint64_t trials,
                        std::uint64_t seed, const MonteCarloOptions& options) {
  check_multi_policies(game, policies);
  return run_trials(game, policies, game.players(), trials, seed, options);
}

TraceCheck verify_trace(const GameTrace& trace) {
  TraceCheck check;
  auto fail = [&](const TraceRow* row, const std::string& what) {
    check.ok = false;
    if (row) {
      check.diagnostics.push_back("round " + std::to_string(row->round_chrono) +
                                  " (rounds left " + std::to_string(row->rounds_left) +
                                  "), player " + std::to_string(row->player) + ": " + what);
    } else {
      check.diagnostics.push_back(what);
    }
  };

  const auto n = static_cast<std::size_t>(trace.players);
  if (trace.players < 1 || trace.rounds < 1) {
    fail(nullptr, "trace has no players or rounds");
    return check;
  }
  if (trace.rows.size() != n * static_cast<std::size_t>(trace.rounds)) {
    fail(nullptr, "expected " + std::to_string(n * trace.rounds) + " rows, found " +
                      std::to_string(trace.rows.size()));
    return check;
  }

  const double eps = kPaymentTolerance * trace.gross;
  for (int chrono = 1; chrono <= trace.rounds; ++chrono) {
    const std::size_t base = static_cast<std::size_t>(chrono - 1) * n;
    std::vector<double> reports(n);
    bool shape_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = trace.rows[base + i];
      if (row.round_chrono != chrono || row.rounds_left != trace.rounds - chrono + 1 ||
          row.player != static_cast<int>(i)) {
        fail(&row, "row out of order");
        shape_ok = false;
      }
      reports[i] = row.report;
    }
    if (!shape_ok) continue;

    std::vector<double> shares;
    if (trace.kind == GameKind::Multi) {
      try {
        shares = cost_share(reports, trace.overhead);
      } catch (const ValidationError& e) {
        fail(&trace.rows[base], e.what());
        continue;
      }
    } else {
      shares = reports;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = trace.rows[base + i];
      if (row.signal < -eps || row.signal > trace.gross + eps) fail(&row, "signal outside [0, D]");
      if (row.report < row.signal - eps) fail(&row, "report below signal");
      if (row.report > trace.gross + eps) fail(&row, "report above D");
      if (!close(row.regular_payment, shares[i])) {
        fail(&row, "regular payment " + format_number(row.regular_payment) + " != " +
                        format_number(shares[i]));
      }
      const double expected_penalty =
          chrono == 1 ? 0.0
                      : trace.rate * std::abs(row.report - trace.rows[base - n + i].report);
      if (!close(row.penalty_payment, expected_penalty)) {
        fail(&row, "penalty payment " + format_number(row.penalty_payment) + " != " +
                        format_number(expected_penalty));
      }
    }
  }
  return check;
}

void write_trace_csv(const GameTrace& trace, std::ostream& out) {
  out << "# flux game trace\n";
  out << "# game=" << (trace.kind == GameKind::Single ? "single" : "multi")
      << " n=" << trace.players << " T=" << trace.rounds
      << " r=" << format_number(trace.rate) << " D=" << format_number(trace.gross);
  if (trace.kind == GameKind::Multi) out << " C=" << format_number(trace.overhead);
  out << "\n# model=" << trace.model << "\n# seed=" << trace.seed << "\n";
  out << "round_chrono,rounds_left,player,signal,report,regular_payment,penalty_payment\n";
  for (const auto& row : trace.rows) {
    out << row.round_chrono << ',' << row.rounds_left << ',' << row.player << ','
        << format_number(row.signal) << ',' << format_number(row.report) << ','
        << format_number(row.regular_payment) << ',' << format_number(row.penalty_payment)
        << '\n';
  }
}

}  // namespace flux
