#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "flux/common.hpp"
#include "flux/policy.hpp"
#include "flux/reduction.hpp"
#include "flux/signal_model.hpp"

namespace flux {

/// Symmetric cost-sharing game: n players with the same consumption D split an
/// overhead C >= n*D in proportion to their reports.
class MultiPlayerGame {
 public:
  MultiPlayerGame(int players, double overhead, int rounds, double rate,
                  SignalModel model);

  int players() const { return players_; }
  double overhead() const { return overhead_; }
  double gross() const { return model_.gross(); }
  int rounds() const { return rounds_; }
  double rate() const { return rate_; }
  const SignalModel& model() const { return model_; }

  MultiPlayerGame with_rate(double rate) const;

 private:
  int players_;
  double overhead_;
  int rounds_;
  double rate_;
  SignalModel model_;
};

/// Every player's previous report; all empty in the first round.
class GroupHistory {
 public:
  static GroupHistory first_round(int players);
  explicit GroupHistory(std::vector<History> reports);

  std::size_t size() const { return reports_.size(); }
  const History& operator[](std::size_t i) const { return reports_[i]; }
  bool is_first_round() const { return reports_.front().is_none(); }

 private:
  std::vector<History> reports_;
};

enum class EquilibriumKind { Nash, Dominant };
std::string to_string(EquilibriumKind kind);

/// payment_i = C * b_i / sum(b); an even split C/n when every report is zero.
std::vector<double> cost_share(std::span<const double> reports, double overhead);

/// Rate at which the truthful profile becomes a dominant-strategy equilibrium
/// under Bernoulli(p) signals.
double dse_threshold(int rounds, double p, int players, double overhead,
                     double gross);
/// Rate at which the truthful profile becomes a Nash equilibrium.
double ne_threshold(int rounds, double p, int players, double overhead,
                    double gross);

/// Sufficient (not minimal) rate for an alpha-truthful DSE or NE under an
/// arbitrary signal model, with p = P(y >= alpha D). Unbounded when p = 0;
/// throws DegenerateProbabilityError when p = 1.
Threshold alpha_threshold_multi(EquilibriumKind kind, int rounds,
                                const SignalModel& model, AlphaLevel alpha,
                                int players, double overhead, double gross);

/// Upper bound on the expected-cost gap between a truthful and a zero prior
/// report when every other player's history is zero:
/// M * sum_{i=1..t} (1-p)^i - p r D * sum_{i=0..t-1} (1-p)^i,
/// M = (C/n) (1 - (1-p)^(n-1)) / p.
double delta_ec_bound(int rounds_left, double p, int players, double overhead,
                      double gross, double rate);

enum class HistoryLevel : std::uint8_t { None = 0, Zero = 1, Full = 2 };

/// Opponent rule from the restricted family used by best_response: a busted
/// player reports D; otherwise the report (0 or D) depends only on rounds left,
/// the player's own history level and how many other players reported zero in
/// the previous round.
class StationaryPolicy {
 public:
  StationaryPolicy(int rounds, int players);

  static StationaryPolicy honest_till_end(int rounds, int players);
  static StationaryPolicy lying_till_end(int rounds, int players);
  static StationaryPolicy lying_till_busted(int rounds, int players);

  /// Own-state family: bit 0 is the first-round decision, then two bits per
  /// remaining round (zero history, truthful history) from rounds_left = T-1
  /// down to 1. A set bit means "report D".
  static int own_state_bits(int rounds);
  static StationaryPolicy from_own_state_bits(int rounds, int players,
                                              std::uint64_t bits);
  /// Group-reactive family: as above, but each later round carries one bit per
  /// (own history, zeros among the others) pair.
  static int group_reactive_bits(int rounds, int players);
  static StationaryPolicy from_group_reactive_bits(int rounds, int players,
                                                   std::uint64_t bits);

  int rounds() const { return rounds_; }
  int players() const { return players_; }

  void set(int rounds_left, HistoryLevel own, int zeros_among_others,
           bool report_full);
  /// Decision when the player's own signal is zero.
  bool reports_full(int rounds_left, HistoryLevel own,
                    int zeros_among_others) const;

  std::string describe() const;

  friend bool operator==(const StationaryPolicy&, const StationaryPolicy&) = default;

 private:
  std::size_t slot(int rounds_left, HistoryLevel own, int zeros) const;

  int rounds_;
  int players_;
  std::vector<std::uint8_t> table_;
};

/// Best-response decision table for one player: (rounds_left, own history,
/// every opponent's history, own signal) -> report in {0, D}.
class ResponsePolicy {
 public:
  ResponsePolicy(int rounds, int players, std::size_t responder);

  int rounds() const { return rounds_; }
  int players() const { return players_; }
  std::size_t responder() const { return responder_; }

  void set(int rounds_left, HistoryLevel own, std::span<const HistoryLevel> others,
           bool busted, bool report_full);
  bool reports_full(int rounds_left, HistoryLevel own,
                    std::span<const HistoryLevel> others, bool busted) const;

 private:
  std::size_t slot(int rounds_left, HistoryLevel own,
                   std::span<const HistoryLevel> others, bool busted) const;

  int rounds_;
  int players_;
  std::size_t responder_;
  std::vector<std::uint8_t> table_;
};

using PlayerPolicy = std::variant<StationaryPolicy, ResponsePolicy>;

/// Report of `player` under `policy`; throws PolicyError when a history is not
/// in {0, D} or the signal is neither 0 nor D.
double decide(const PlayerPolicy& policy, int rounds_left, std::size_t player,
              const GroupHistory& history, double signal, double gross);

/// Expected cost-to-go of the responder per (rounds_left, own history,
/// opponents' histories).
class ResponseValues {
 public:
  ResponseValues(int rounds, int players);

  double value(int rounds_left, HistoryLevel own,
               std::span<const HistoryLevel> others) const;
  void set(int rounds_left, HistoryLevel own, std::span<const HistoryLevel> others,
           double v);
  double root() const;

  int rounds() const { return rounds_; }
  int players() const { return players_; }

 private:
  std::size_t slot(int rounds_left, HistoryLevel own,
                   std::span<const HistoryLevel> others) const;

  int rounds_;
  int players_;
  std::vector<double> values_;
};

struct ResponseSolution {
  ResponsePolicy policy;
  ResponseValues values;
};

struct MultiSolveOptions {
  std::uint64_t state_cap = kDefaultStateCap;
  double tie_tolerance = kTieTolerance;
};

/// Joint (history, signal) state count of a best-response solve.
std::uint64_t response_state_count(int rounds, int players);

/// Optimal policy of `responder` against fixed opponent rules (one per other
/// player, in increasing player order). Bernoulli signals only.
ResponseSolution best_response(const MultiPlayerGame& game, std::size_t responder,
                               std::span<const StationaryPolicy> opponents,
                               const MultiSolveOptions& options = {});

/// Expected cost-to-go when the responder follows `own` instead of optimizing.
ResponseValues evaluate_policy(const MultiPlayerGame& game,
                               const StationaryPolicy& own,
                               std::span<const StationaryPolicy> opponents,
                               const MultiSolveOptions& options = {});

/// Responder cost gap V(t, D history) - V(t, zero history) for the given
/// opponent histories.
double delta_ec(const ResponseValues& values, int rounds_left,
                std::span<const HistoryLevel> others);

enum class OpponentFamily { OwnState, GroupReactive };

struct EquilibriumOptions {
  OpponentFamily family = OpponentFamily::OwnState;
  std::uint64_t profile_cap = std::uint64_t{1} << 22;
  MultiSolveOptions solve;
};

struct Deviation {
  std::size_t player;
  int rounds_left;
  int round_chrono;
  double report;
  double improvement;        ///< honest expected cost minus best-response cost
  std::string opponent_profile;
};

struct EquilibriumReport {
  EquilibriumKind kind;
  double rate_tested;
  double threshold;  ///< closed-form rate for reference
  bool holds;
  std::optional<Deviation> witness;
  std::uint64_t profiles_checked = 0;
};

/// Brute-force check that the truthful profile is an equilibrium at the game's
/// rate. NE: no best response against truthful opponents beats honest-till-end
/// by more than the tie tolerance. DSE: the same against every opponent profile
/// of the chosen family. The game is symmetric, so player 0 stands for all.
EquilibriumReport check_equilibrium(const MultiPlayerGame& game,
                                    EquilibriumKind kind,
                                    const EquilibriumOptions& options = {});

/// Bisects the rate at which check_equilibrium starts to hold.
double equilibrium_switching_rate(const MultiPlayerGame& game,
                                  EquilibriumKind kind, double lo, double hi,
                                  double tol,
                                  const EquilibriumOptions& options = {});

}  // namespace flux
