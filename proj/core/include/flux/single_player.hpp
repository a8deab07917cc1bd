#pragma once

#include <string>
#include <variant>
#include <vector>

#include "flux/common.hpp"
#include "flux/policy.hpp"
#include "flux/signal_model.hpp"

namespace flux {

/// Immutable parameters of the single-player repeated game.
class SinglePlayerGame {
 public:
  SinglePlayerGame(int rounds, double rate, SignalModel model);

  int rounds() const { return rounds_; }
  double rate() const { return rate_; }
  double gross() const { return model_.gross(); }
  const SignalModel& model() const { return model_; }

 private:
  int rounds_;
  double rate_;
  SignalModel model_;
};

// Optimal-strategy regimes. MixedLieFirst::k counts chronological rounds: the first k
// rounds of the game are played lying-till-end, the rest lying-till-busted.
struct LyingTillEnd {
  friend bool operator==(const LyingTillEnd&, const LyingTillEnd&) = default;
};
struct LyingTillBustedPlusLieLastRound {
  friend bool operator==(const LyingTillBustedPlusLieLastRound&,
                         const LyingTillBustedPlusLieLastRound&) = default;
};
struct LyingTillBusted {
  friend bool operator==(const LyingTillBusted&, const LyingTillBusted&) = default;
};
struct HonestTillEnd {
  friend bool operator==(const HonestTillEnd&, const HonestTillEnd&) = default;
};
struct MixedLieFirst {
  int k = 1;
  friend bool operator==(const MixedLieFirst&, const MixedLieFirst&) = default;
};

using StrategyClass = std::variant<LyingTillEnd, LyingTillBustedPlusLieLastRound,
                                   LyingTillBusted, HonestTillEnd, MixedLieFirst>;

std::string to_string(const StrategyClass& s);

struct ThresholdRow {
  int rounds_left;
  Threshold no_history;      ///< unbounded for every round but the first
  double truthful_history;   ///< r_t^(D)
};

struct ThresholdCurve {
  std::vector<ThresholdRow> rows;  ///< rounds_left = 1..T
};

struct SegmentCosts {
  double expected_honest;
  double expected_lying;
};

/// Minimum rate that makes honest reporting optimal from the first round:
/// (1 - (1-p)^T) / (p - p(1-p)^(T-1)).
double truthful_threshold(int rounds, double p);

/// Rate above which a player with a truthful history keeps reporting D with
/// `rounds_left` rounds to go.
double history_threshold(int rounds_left, double p);

/// Optimal-strategy regime for rate r; boundary ties resolve toward the more
/// truthful class.
StrategyClass classify_strategy(int rounds, double p, double rate);

/// Decision table on the {0, D} grid that a regime prescribes in every state,
/// including states the regime itself never reaches (a zero history always
/// keeps lying when the signal allows it).
Policy induced_policy(const StrategyClass& strategy, int rounds, double gross);

/// Expected cost of honest-till-end versus lying-till-busted over the segment
/// that ends when the player is first busted.
SegmentCosts segment_costs(int rounds, double p, double rate, double gross);

ThresholdCurve threshold_curve(int rounds, double p);

}  // namespace flux
