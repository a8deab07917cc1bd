#include "flux/single_player.hpp"

#include <cmath>
#include <vector>

namespace flux {
namespace {

void check_rounds(int rounds) {
  if (rounds < 2) {
    throw ValidationError("T: the game needs T > 1 rounds, got " +
                          std::to_string(rounds));
  }
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("p: busted probability must lie strictly in (0, 1)");
  }
}

void check_rate(double rate) {
  if (!std::isfinite(rate) || rate < 0.0) {
    throw ValidationError("r: penalty rate must be a nonnegative real");
  }
}

// Rounds-left values in [1, T-1] at which a truthful history stays truthful,
// plus whether the first round is played truthfully.
struct TruthfulRounds {
  std::vector<bool> with_history;  // index t-1
  bool first_round = false;
};

TruthfulRounds truthful_rounds(const StrategyClass& strategy, int rounds) {
  TruthfulRounds out;
  out.with_history.assign(static_cast<std::size_t>(rounds - 1), false);
  auto mark = [&](int from, int to) {
    for (int t = from; t <= to; ++t) out.with_history[t - 1] = true;
  };
  if (std::holds_alternative<LyingTillEnd>(strategy)) {
  } else if (std::holds_alternative<LyingTillBustedPlusLieLastRound>(strategy)) {
    mark(2, rounds - 1);
  } else if (std::holds_alternative<LyingTillBusted>(strategy)) {
    mark(1, rounds - 1);
  } else if (std::holds_alternative<HonestTillEnd>(strategy)) {
    mark(1, rounds - 1);
    out.first_round = true;
  } else {
    const int k = std::get<MixedLieFirst>(strategy).k;
    if (k < 1 || k > rounds - 1) {
      throw ValidationError("k: MixedLieFirst needs 1 <= k <= T-1");
    }
    mark(1, rounds - k);
  }
  return out;
}

}  // namespace

SinglePlayerGame::SinglePlayerGame(int rounds, double rate, SignalModel model)
    : rounds_(rounds), rate_(rate), model_(std::move(model)) {
  check_rounds(rounds);
  check_rate(rate);
}

std::string to_string(const StrategyClass& s) {
  struct Namer {
    std::string operator()(const LyingTillEnd&) const { return "lying-till-end"; }
    std::string operator()(const LyingTillBustedPlusLieLastRound&) const {
      return "lying-till-busted+lie-last-round";
    }
    std::string operator()(const LyingTillBusted&) const {
      return "lying-till-busted";
    }
    std::string operator()(const HonestTillEnd&) const { return "honest-till-end"; }
    std::string operator()(const MixedLieFirst& m) const {
      return "lying-till-end-first-" + std::to_string(m.k) +
             "+lying-till-busted";
    }
  };
  return std::visit(Namer{}, s);
}

double truthful_threshold(int rounds, double p) {
  check_rounds(rounds);
  check_probability(p);
  const double q = 1.0 - p;
  return (1.0 - std::pow(q, rounds)) / (p - p * std::pow(q, rounds - 1));
}

double history_threshold(int rounds_left, double p) {
  if (rounds_left < 1) throw ValidationError("t: rounds left must be >= 1");
  check_probability(p);
  if (p <= 0.5) {
    const double q = 1.0 - p;
    return (1.0 - std::pow(q, rounds_left)) /
           (2.0 * p - p * std::pow(q, rounds_left - 1));
  }
  return rounds_left == 1 ? 1.0 : 1.0 / (2.0 * p);
}

StrategyClass classify_strategy(int rounds, double p, double rate) {
  check_rounds(rounds);
  check_probability(p);
  check_rate(rate);
  const double slack = rate + kTieTolerance;
  if (slack >= truthful_threshold(rounds, p)) return HonestTillEnd{};

  // history_threshold is increasing in t for p <= 1/2, and for p > 1/2 its
  // only distinct value is at t = 1, so the truthful set is an interval.
  int lowest = 0;
  int highest = 0;
  int count = 0;
  for (int t = 1; t <= rounds - 1; ++t) {
    if (slack >= history_threshold(t, p)) {
      if (count == 0) lowest = t;
      highest = t;
      ++count;
    }
  }
  if (count == 0) return LyingTillEnd{};
  if (lowest == 1 && highest == rounds - 1) return LyingTillBusted{};
  if (lowest == 2 && highest == rounds - 1) return LyingTillBustedPlusLieLastRound{};
  if (lowest != 1) {
    throw std::logic_error("classify_strategy: truthful rounds do not form a "
                           "known regime");
  }
  return MixedLieFirst{rounds - highest};
}

Policy induced_policy(const StrategyClass& strategy, int rounds, double gross) {
  check_rounds(rounds);
  const TruthfulRounds truthful = truthful_rounds(strategy, rounds);
  Policy policy(ReportGrid::binary(gross), rounds);
  constexpr std::size_t kZero = 0;
  constexpr std::size_t kFull = 1;
  policy.set(rounds, std::nullopt, kFull, kFull);
  policy.set(rounds, std::nullopt, kZero, truthful.first_round ? kFull : kZero);
  for (int t = rounds - 1; t >= 1; --t) {
    policy.set(t, kZero, kFull, kFull);
    policy.set(t, kZero, kZero, kZero);
    policy.set(t, kFull, kFull, kFull);
    policy.set(t, kFull, kZero, truthful.with_history[t - 1] ? kFull : kZero);
  }
  return policy;
}

SegmentCosts segment_costs(int rounds, double p, double rate, double gross) {
  check_rounds(rounds);
  check_probability(p);
  check_rate(rate);
  if (!(gross > 0.0)) throw ValidationError("D: gross consumption must be positive");
  const double q = 1.0 - p;
  const double busted_before_end = 1.0 - std::pow(q, rounds - 1);
  return {gross + gross * (q / p) * busted_before_end,
          rate * gross * busted_before_end};
}

ThresholdCurve threshold_curve(int rounds, double p) {
  check_rounds(rounds);
  check_probability(p);
  ThresholdCurve curve;
  for (int t = 1; t <= rounds; ++t) {
    curve.rows.push_back(
        {t,
         t == rounds ? Threshold::finite(truthful_threshold(rounds, p))
                     : Threshold::unbounded(),
         history_threshold(t, p)});
  }
  return curve;
}

}  // namespace flux
