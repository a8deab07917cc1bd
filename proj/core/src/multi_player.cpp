#include "flux/multi_player.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "flux/single_player.hpp"

namespace flux {
namespace {

constexpr int kMaxPlayersSolved = 30;

std::size_t pow3(int k) {
  std::size_t out = 1;
  for (int i = 0; i < k; ++i) out *= 3;
  return out;
}

void check_players(int players) {
  if (players < 2) throw ValidationError("n: the game needs n >= 2 players");
}

void check_rounds(int rounds) {
  if (rounds < 2) throw ValidationError("T: the game needs T > 1 rounds");
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p: must lie in (0, 1)");
}

void check_cost(int players, double overhead, double gross) {
  if (!(gross > 0.0) || !std::isfinite(gross)) {
    throw ValidationError("D: gross consumption must be positive");
  }
  if (!(overhead > 0.0) || !std::isfinite(overhead)) {
    throw ValidationError("C: overhead cost must be positive");
  }
  if (overhead < players * gross * (1.0 - 1e-12)) {
    throw ValidationError("C: overhead must satisfy C >= n*D");
  }
}

double bernoulli_p(const MultiPlayerGame& game) {
  if (!game.model().is_bernoulli()) {
    throw ValidationError("model: brute-force equilibrium checks need a Bernoulli signal");
  }
  return std::get<BernoulliSignal>(game.model().variant()).p;
}

HistoryLevel level_of(const History& h, double gross) {
  if (h.is_none()) return HistoryLevel::None;
  const double eps = 1e-12 * gross;
  if (std::abs(h.value()) <= eps) return HistoryLevel::Zero;
  if (std::abs(h.value() - gross) <= eps) return HistoryLevel::Full;
  throw PolicyError("history report " + format_number(h.value()) +
                    " is neither 0 nor D");
}

bool opponent_full(std::span<const StationaryPolicy> opponents, int t,
                   HistoryLevel own, std::span<const HistoryLevel> others,
                   std::size_t j) {
  int zeros = own == HistoryLevel::Zero ? 1 : 0;
  for (std::size_t k = 0; k < others.size(); ++k) {
    if (k != j && others[k] == HistoryLevel::Zero) ++zeros;
  }
  return opponents[j].reports_full(t, others[j], zeros);
}

void check_opponents(const MultiPlayerGame& game, std::size_t responder,
                     std::span<const StationaryPolicy> opponents) {
  const int n = game.players();
  if (responder >= static_cast<std::size_t>(n)) {
    throw ValidationError("player: responder index out of range");
  }
  if (opponents.size() != static_cast<std::size_t>(n - 1)) {
    throw ValidationError("opponents: expected one policy per other player");
  }
  for (const auto& pol : opponents) {
    if (pol.rounds() != game.rounds() || pol.players() != n) {
      throw ValidationError("opponents: policy shape does not match the game");
    }
  }
}

void check_capacity(const MultiPlayerGame& game, const MultiSolveOptions& options) {
  const int n = game.players();
  const auto states = n > kMaxPlayersSolved
                          ? std::numeric_limits<std::uint64_t>::max()
                          : response_state_count(game.rounds(), n);
  if (states > options.state_cap) {
    throw CapacityError(
        "best_response: " +
        (n > kMaxPlayersSolved ? std::string("too many") : std::to_string(states)) +
        " joint states (n=" + std::to_string(n) + ", T=" +
        std::to_string(game.rounds()) + ") exceed the cap of " +
        std::to_string(options.state_cap) + "; raise FLUX_STATE_CAP or shrink n or T");
  }
}

// Backward induction for the responder. With `fixed` null the responder
// optimizes; otherwise it follows the given stationary rule.
ResponseValues backward(const MultiPlayerGame& game,
                        std::span<const StationaryPolicy> opponents,
                        const StationaryPolicy* fixed, const MultiSolveOptions& options,
                        ResponsePolicy* policy_out) {
  check_capacity(game, options);
  const double p = bernoulli_p(game);
  const int n = game.players();
  const int m = n - 1;
  const int rounds = game.rounds();
  const double C = game.overhead();
  const double D = game.gross();
  const double rD = game.rate() * D;

  ResponseValues values(rounds, n);
  std::vector<HistoryLevel> others(m), next(m);
  std::vector<char> decision(m);
  const std::size_t masks = std::size_t{1} << m;

  // Probability of each busted pattern among the opponents.
  std::vector<double> mask_prob(masks);
  for (std::size_t b = 0; b < masks; ++b) {
    double pr = 1.0;
    for (int j = 0; j < m; ++j) pr *= ((b >> j) & 1U) ? p : 1.0 - p;
    mask_prob[b] = pr;
  }

  for (int t = 1; t <= rounds; ++t) {
    const bool first = t == rounds;
    const std::size_t own_count = first ? 1 : 2;
    const std::size_t hist_masks = first ? 1 : masks;
    for (std::size_t o = 0; o < own_count; ++o) {
      const HistoryLevel own =
          first ? HistoryLevel::None : (o == 0 ? HistoryLevel::Zero : HistoryLevel::Full);
      for (std::size_t hm = 0; hm < hist_masks; ++hm) {
        int zeros_seen = 0;
        for (int j = 0; j < m; ++j) {
          others[j] = first ? HistoryLevel::None
                            : (((hm >> j) & 1U) ? HistoryLevel::Full : HistoryLevel::Zero);
          if (others[j] == HistoryLevel::Zero) ++zeros_seen;
        }
        for (int j = 0; j < m; ++j) {
          decision[j] = opponent_full(opponents, t, own, others, j);
        }
        const double pen_full = own == HistoryLevel::Zero ? rD : 0.0;
        const double pen_zero = own == HistoryLevel::Full ? rD : 0.0;

        double e_full = 0.0;
        double e_zero = 0.0;
        for (std::size_t b = 0; b < masks; ++b) {
          int nfull = 0;
          for (int j = 0; j < m; ++j) {
            const bool full = ((b >> j) & 1U) || decision[j];
            next[j] = full ? HistoryLevel::Full : HistoryLevel::Zero;
            nfull += full ? 1 : 0;
          }
          double c_full = C / (1 + nfull) + pen_full;
          double c_zero = (nfull == 0 ? C / n : 0.0) + pen_zero;
          if (t > 1) {
            c_full += values.value(t - 1, HistoryLevel::Full, next);
            c_zero += values.value(t - 1, HistoryLevel::Zero, next);
          }
          e_full += mask_prob[b] * c_full;
          e_zero += mask_prob[b] * c_zero;
        }

        bool lie;
        if (fixed) {
          lie = !fixed->reports_full(t, own, zeros_seen);
        } else {
          lie = e_zero < e_full - options.tie_tolerance;
        }
        values.set(t, own, others, p * e_full + (1.0 - p) * (lie ? e_zero : e_full));
        if (policy_out) {
          policy_out->set(t, own, others, true, true);
          policy_out->set(t, own, others, false, !lie);
        }
      }
    }
  }
  return values;
}

// First chronological state on the responder's honest path where the best
// response reports 0 with a zero signal.
std::optional<std::pair<int, HistoryLevel>> first_deviation(
    const MultiPlayerGame& game, const ResponsePolicy& br,
    std::span<const StationaryPolicy> opponents) {
  const int m = game.players() - 1;
  const int rounds = game.rounds();
  std::set<std::vector<HistoryLevel>> frontier{
      std::vector<HistoryLevel>(m, HistoryLevel::None)};
  for (int t = rounds; t >= 1; --t) {
    const HistoryLevel own = t == rounds ? HistoryLevel::None : HistoryLevel::Full;
    std::set<std::vector<HistoryLevel>> next_frontier;
    for (const auto& others : frontier) {
      if (!br.reports_full(t, own, others, false)) return std::make_pair(t, own);
      std::vector<char> decision(m);
      for (int j = 0; j < m; ++j) decision[j] = opponent_full(opponents, t, own, others, j);
      for (std::size_t b = 0; b < (std::size_t{1} << m); ++b) {
        std::vector<HistoryLevel> next(m);
        for (int j = 0; j < m; ++j) {
          next[j] = (((b >> j) & 1U) || decision[j]) ? HistoryLevel::Full
                                                      : HistoryLevel::Zero;
        }
        next_frontier.insert(std::move(next));
      }
    }
    frontier = std::move(next_frontier);
  }
  return std::nullopt;
}

std::string describe_profile(std::span<const StationaryPolicy> opponents) {
  std::string out;
  for (std::size_t j = 0; j < opponents.size(); ++j) {
    if (j) out += " | ";
    out += "player " + std::to_string(j + 1) + ": " + opponents[j].describe();
  }
  return out;
}

}  // namespace

MultiPlayerGame::MultiPlayerGame(int players, double overhead, int rounds,
                                 double rate, SignalModel model)
    : players_(players), overhead_(overhead), rounds_(rounds), rate_(rate),
      model_(std::move(model)) {
  check_players(players);
  check_rounds(rounds);
  if (!std::isfinite(rate) || rate < 0.0) {
    throw ValidationError("r: rate must be a nonnegative real");
  }
  check_cost(players, overhead, model_.gross());
}

MultiPlayerGame MultiPlayerGame::with_rate(double rate) const {
  return MultiPlayerGame(players_, overhead_, rounds_, rate, model_);
}

GroupHistory GroupHistory::first_round(int players) {
  check_players(players);
  return GroupHistory(std::vector<History>(players, History::none()));
}

GroupHistory::GroupHistory(std::vector<History> reports) : reports_(std::move(reports)) {
  if (reports_.empty()) throw ValidationError("history: at least one player required");
  const bool none = reports_.front().is_none();
  for (const auto& h : reports_) {
    if (h.is_none() != none) {
      throw ValidationError("history: either every player has a prior report or none does");
    }
  }
}

std::string to_string(EquilibriumKind kind) {
  return kind == EquilibriumKind::Nash ? "ne" : "dse";
}

std::vector<double> cost_share(std::span<const double> reports, double overhead) {
  if (reports.empty()) throw ValidationError("reports: at least one report required");
  if (!(overhead > 0.0) || !std::isfinite(overhead)) {
    throw ValidationError("C: overhead cost must be positive");
  }
  double total = 0.0;
  for (double b : reports) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw ValidationError("reports: every report must be a nonnegative real");
    }
    total += b;
  }
  std::vector<double> out(reports.size());
  if (total == 0.0) {
    std::fill(out.begin(), out.end(), overhead / static_cast<double>(reports.size()));
    return out;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) out[i] = overhead * (reports[i] / total);
  return out;
}

double ne_threshold(int rounds, double p, int players, double overhead, double gross) {
  check_players(players);
  check_rounds(rounds);
  check_p(p);
  check_cost(players, overhead, gross);
  return overhead / (players * gross) * truthful_threshold(rounds, p);
}

double dse_threshold(int rounds, double p, int players, double overhead, double gross) {
  const double ne = ne_threshold(rounds, p, players, overhead, gross);
  return ne * (1.0 - std::pow(1.0 - p, players - 1)) / p;
}

Threshold alpha_threshold_multi(EquilibriumKind kind, int rounds,
                                const SignalModel& model, AlphaLevel alpha,
                                int players, double overhead, double gross) {
  check_players(players);
  check_rounds(rounds);
  check_cost(players, overhead, gross);
  const double p = busted_probability(model, alpha.value());
  if (p <= 0.0) return Threshold::unbounded();
  if (p >= 1.0) {
    throw DegenerateProbabilityError(
        "alpha: every signal is at least alpha*D (busted probability 1); the "
        "threshold formula is degenerate");
  }
  double rate = overhead / (players * gross) * truthful_threshold(rounds, p) /
                alpha.value();
  if (kind == EquilibriumKind::Dominant) {
    rate *= (1.0 - std::pow(1.0 - p, players)) / p;
  }
  return Threshold::finite(rate);
}

double delta_ec_bound(int rounds_left, double p, int players, double overhead,
                      double gross, double rate) {
  if (rounds_left < 1) throw ValidationError("t: rounds left must be at least 1");
  check_players(players);
  check_p(p);
  const double q = 1.0 - p;
  const double big_m = overhead / players * (1.0 - std::pow(q, players - 1)) / p;
  double upper = 0.0;
  double lower = 0.0;
  double qi = 1.0;
  for (int i = 0; i < rounds_left; ++i) {
    lower += qi;
    qi *= q;
    upper += qi;
  }
  return big_m * upper - p * rate * gross * lower;
}

// ---------------------------------------------------------------------------

StationaryPolicy::StationaryPolicy(int rounds, int players)
    : rounds_(rounds), players_(players) {
  check_rounds(rounds);
  check_players(players);
  table_.assign(static_cast<std::size_t>(rounds) * 3 * players, 1);
}

std::size_t StationaryPolicy::slot(int rounds_left, HistoryLevel own, int zeros) const {
  if (rounds_left < 1 || rounds_left > rounds_) {
    throw PolicyError("rounds left " + std::to_string(rounds_left) + " outside 1.." +
                      std::to_string(rounds_));
  }
  if ((own == HistoryLevel::None) != (rounds_left == rounds_)) {
    throw PolicyError("history presence does not match rounds left " +
                      std::to_string(rounds_left));
  }
  if (zeros < 0 || zeros >= players_ || (own == HistoryLevel::None && zeros != 0)) {
    throw PolicyError("zero count " + std::to_string(zeros) + " out of range");
  }
  return (static_cast<std::size_t>(rounds_left - 1) * 3 + static_cast<std::size_t>(own)) *
             static_cast<std::size_t>(players_) +
         static_cast<std::size_t>(zeros);
}

void StationaryPolicy::set(int rounds_left, HistoryLevel own, int zeros_among_others,
                           bool report_full) {
  table_[slot(rounds_left, own, zeros_among_others)] = report_full ? 1 : 0;
}

bool StationaryPolicy::reports_full(int rounds_left, HistoryLevel own,
                                    int zeros_among_others) const {
  return table_[slot(rounds_left, own, zeros_among_others)] != 0;
}

StationaryPolicy StationaryPolicy::honest_till_end(int rounds, int players) {
  return StationaryPolicy(rounds, players);
}

StationaryPolicy StationaryPolicy::lying_till_end(int rounds, int players) {
  StationaryPolicy pol(rounds, players);
  pol.set(rounds, HistoryLevel::None, 0, false);
  for (int t = 1; t < rounds; ++t) {
    for (int z = 0; z < players; ++z) {
      pol.set(t, HistoryLevel::Zero, z, false);
      pol.set(t, HistoryLevel::Full, z, false);
    }
  }
  return pol;
}

StationaryPolicy StationaryPolicy::lying_till_busted(int rounds, int players) {
  StationaryPolicy pol(rounds, players);
  pol.set(rounds, HistoryLevel::None, 0, false);
  for (int t = 1; t < rounds; ++t) {
    for (int z = 0; z < players; ++z) {
      pol.set(t, HistoryLevel::Zero, z, false);
      pol.set(t, HistoryLevel::Full, z, true);
    }
  }
  return pol;
}

int StationaryPolicy::own_state_bits(int rounds) { return 1 + 2 * (rounds - 1); }

int StationaryPolicy::group_reactive_bits(int rounds, int players) {
  return 1 + 2 * (rounds - 1) * players;
}

StationaryPolicy StationaryPolicy::from_own_state_bits(int rounds, int players,
                                                       std::uint64_t bits) {
  StationaryPolicy pol(rounds, players);
  if (own_state_bits(rounds) > 63) throw ValidationError("T: too many rounds to encode");
  pol.set(rounds, HistoryLevel::None, 0, bits & 1U);
  for (int t = rounds - 1; t >= 1; --t) {
    const int k = rounds - 1 - t;
    for (int z = 0; z < players; ++z) {
      pol.set(t, HistoryLevel::Zero, z, (bits >> (1 + 2 * k)) & 1U);
      pol.set(t, HistoryLevel::Full, z, (bits >> (2 + 2 * k)) & 1U);
    }
  }
  return pol;
}

StationaryPolicy StationaryPolicy::from_group_reactive_bits(int rounds, int players,
                                                            std::uint64_t bits) {
  StationaryPolicy pol(rounds, players);
  if (group_reactive_bits(rounds, players) > 63) {
    throw ValidationError("n: too many (round, zero count) pairs to encode");
  }
  pol.set(rounds, HistoryLevel::None, 0, bits & 1U);
  for (int t = rounds - 1; t >= 1; --t) {
    const int k = rounds - 1 - t;
    for (int own = 0; own < 2; ++own) {
      for (int z = 0; z < players; ++z) {
        const int bit = 1 + (k * 2 + own) * players + z;
        pol.set(t, own == 0 ? HistoryLevel::Zero : HistoryLevel::Full, z,
                (bits >> bit) & 1U);
      }
    }
  }
  return pol;
}

std::string StationaryPolicy::describe() const {
  // e.g. "t3:0 t2:Z00/D11 t1:Z00/D11" with one digit per zero count.
  std::string out = "t" + std::to_string(rounds_) + ":" +
                    (reports_full(rounds_, HistoryLevel::None, 0) ? "1" : "0");
  for (int t = rounds_ - 1; t >= 1; --t) {
    out += " t" + std::to_string(t) + ":Z";
    for (int z = 0; z < players_; ++z) {
      out += reports_full(t, HistoryLevel::Zero, z) ? '1' : '0';
    }
    out += "/D";
    for (int z = 0; z < players_; ++z) {
      out += reports_full(t, HistoryLevel::Full, z) ? '1' : '0';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t others_code(std::span<const HistoryLevel> others) {
  std::size_t code = 0;
  std::size_t scale = 1;
  for (auto lv : others) {
    code += static_cast<std::size_t>(lv) * scale;
    scale *= 3;
  }
  return code;
}

}  // namespace

ResponsePolicy::ResponsePolicy(int rounds, int players, std::size_t responder)
    : rounds_(rounds), players_(players), responder_(responder) {
  check_rounds(rounds);
  check_players(players);
  if (players > kMaxPlayersSolved) throw CapacityError("n: too many players to tabulate");
  if (responder >= static_cast<std::size_t>(players)) {
    throw ValidationError("player: responder index out of range");
  }
  table_.assign(static_cast<std::size_t>(rounds + 1) * pow3(players) * 2, 255);
}

std::size_t ResponsePolicy::slot(int rounds_left, HistoryLevel own,
                                 std::span<const HistoryLevel> others, bool busted) const {
  if (rounds_left < 1 || rounds_left > rounds_ ||
      others.size() != static_cast<std::size_t>(players_ - 1)) {
    throw PolicyError("state outside the response table");
  }
  return ((static_cast<std::size_t>(rounds_left) * 3 + static_cast<std::size_t>(own)) *
              pow3(players_ - 1) +
          others_code(others)) *
             2 +
         (busted ? 1 : 0);
}

void ResponsePolicy::set(int rounds_left, HistoryLevel own,
                         std::span<const HistoryLevel> others, bool busted,
                         bool report_full) {
  table_[slot(rounds_left, own, others, busted)] = report_full ? 1 : 0;
}

bool ResponsePolicy::reports_full(int rounds_left, HistoryLevel own,
                                  std::span<const HistoryLevel> others,
                                  bool busted) const {
  const auto v = table_[slot(rounds_left, own, others, busted)];
  if (v == 255) {
    throw PolicyError("response policy undefined at rounds left " +
                      std::to_string(rounds_left));
  }
  return v != 0;
}

double decide(const PlayerPolicy& policy, int rounds_left, std::size_t player,
              const GroupHistory& history, double signal, double gross) {
  const double eps = 1e-12 * gross;
  const bool busted = std::abs(signal - gross) <= eps;
  if (!busted && std::abs(signal) > eps) {
    throw PolicyError("signal " + format_number(signal) + " is neither 0 nor D");
  }
  if (player >= history.size()) throw PolicyError("player index out of range");

  std::vector<HistoryLevel> levels(history.size());
  for (std::size_t k = 0; k < history.size(); ++k) levels[k] = level_of(history[k], gross);

  if (const auto* sp = std::get_if<StationaryPolicy>(&policy)) {
    if (busted) return gross;
    int zeros = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (k != player && levels[k] == HistoryLevel::Zero) ++zeros;
    }
    return sp->reports_full(rounds_left, levels[player], zeros) ? gross : 0.0;
  }
  const auto& rp = std::get<ResponsePolicy>(policy);
  if (player != rp.responder()) {
    throw PolicyError("response policy belongs to player " +
                      std::to_string(rp.responder()));
  }
  std::vector<HistoryLevel> others;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (k != player) others.push_back(levels[k]);
  }
  return rp.reports_full(rounds_left, levels[player], others, busted) ? gross : 0.0;
}

// ---------------------------------------------------------------------------

ResponseValues::ResponseValues(int rounds, int players)
    : rounds_(rounds), players_(players) {
  if (players > kMaxPlayersSolved) throw CapacityError("n: too many players to tabulate");
  values_.assign(static_cast<std::size_t>(rounds + 1) * pow3(players), 0.0);
}

std::size_t ResponseValues::slot(int rounds_left, HistoryLevel own,
                                 std::span<const HistoryLevel> others) const {
  if (rounds_left < 0 || rounds_left > rounds_ ||
      others.size() != static_cast<std::size_t>(players_ - 1)) {
    throw std::out_of_range("ResponseValues: state outside the table");
  }
  return (static_cast<std::size_t>(rounds_left) * 3 + static_cast<std::size_t>(own)) *
             pow3(players_ - 1) +
         others_code(others);
}

double ResponseValues::value(int rounds_left, HistoryLevel own,
                             std::span<const HistoryLevel> others) const {
  if (rounds_left == 0) return 0.0;
  return values_[slot(rounds_left, own, others)];
}

void ResponseValues::set(int rounds_left, HistoryLevel own,
                         std::span<const HistoryLevel> others, double v) {
  values_[slot(rounds_left, own, others)] = v;
}

double ResponseValues::root() const {
  const std::vector<HistoryLevel> none(players_ - 1, HistoryLevel::None);
  return value(rounds_, HistoryLevel::None, none);
}

std::uint64_t response_state_count(int rounds, int players) {
  if (players > kMaxPlayersSolved) return std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t joint = std::uint64_t{1} << players;
  return (1 + static_cast<std::uint64_t>(rounds - 1) * joint) * joint;
}

ResponseSolution best_response(const MultiPlayerGame& game, std::size_t responder,
                               std::span<const StationaryPolicy> opponents,
                               const MultiSolveOptions& options) {
  check_opponents(game, responder, opponents);
  check_capacity(game, options);
  ResponsePolicy policy(game.rounds(), game.players(), responder);
  auto values = backward(game, opponents, nullptr, options, &policy);
  return ResponseSolution{std::move(policy), std::move(values)};
}

ResponseValues evaluate_policy(const MultiPlayerGame& game, const StationaryPolicy& own,
                               std::span<const StationaryPolicy> opponents,
                               const MultiSolveOptions& options) {
  check_opponents(game, 0, opponents);
  if (own.rounds() != game.rounds() || own.players() != game.players()) {
    throw ValidationError("policy: shape does not match the game");
  }
  return backward(game, opponents, &own, options, nullptr);
}

double delta_ec(const ResponseValues& values, int rounds_left,
                std::span<const HistoryLevel> others) {
  if (rounds_left < 1 || rounds_left >= values.rounds()) {
    throw ValidationError("t: the cost gap needs a prior report (1 <= t < T)");
  }
  return values.value(rounds_left, HistoryLevel::Full, others) -
         values.value(rounds_left, HistoryLevel::Zero, others);
}

// ---------------------------------------------------------------------------

EquilibriumReport check_equilibrium(const MultiPlayerGame& game, EquilibriumKind kind,
                                    const EquilibriumOptions& options) {
  const double p = bernoulli_p(game);
  const int n = game.players();
  const int rounds = game.rounds();
  const auto m = static_cast<std::size_t>(n - 1);
  check_capacity(game, options.solve);

  EquilibriumReport report{kind, game.rate(),
                           kind == EquilibriumKind::Nash
                               ? ne_threshold(rounds, p, n, game.overhead(), game.gross())
                               : dse_threshold(rounds, p, n, game.overhead(), game.gross()),
                           true, std::nullopt, 0};

  const auto honest = StationaryPolicy::honest_till_end(rounds, n);
  std::vector<StationaryPolicy> opponents(m, honest);

  // Returns true when the responder has a profitable deviation.
  auto probe = [&]() {
    ++report.profiles_checked;
    auto br = best_response(game, 0, opponents, options.solve);
    const double honest_cost = evaluate_policy(game, honest, opponents, options.solve).root();
    const double improvement = honest_cost - br.values.root();
    if (improvement <= options.solve.tie_tolerance) return false;
    const auto dev = first_deviation(game, br.policy, opponents);
    if (!dev) throw std::logic_error("check_equilibrium: deviation not on the honest path");
    report.holds = false;
    report.witness = Deviation{0,          dev->first, rounds - dev->first + 1, 0.0,
                               improvement, describe_profile(opponents)};
    return true;
  };

  if (kind == EquilibriumKind::Nash) {
    probe();
    return report;
  }

  if (options.family == OpponentFamily::GroupReactive) {
    const int bits = StationaryPolicy::group_reactive_bits(rounds, n);
    if (bits > 62 || (std::uint64_t{1} << bits) > options.profile_cap) {
      throw CapacityError("check_equilibrium: 2^" + std::to_string(bits) +
                          " symmetric group-reactive profiles exceed the cap of " +
                          std::to_string(options.profile_cap));
    }
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
      std::fill(opponents.begin(), opponents.end(),
                StationaryPolicy::from_group_reactive_bits(rounds, n, code));
      if (probe()) return report;
    }
    return report;
  }

  const int bits = StationaryPolicy::own_state_bits(rounds);
  if (bits > 62) throw CapacityError("check_equilibrium: too many rounds to enumerate");
  const std::uint64_t per_player = std::uint64_t{1} << bits;
  if (per_player > options.profile_cap) {
    throw CapacityError("check_equilibrium: " + std::to_string(per_player) +
                        " policies per opponent exceed the profile cap of " +
                        std::to_string(options.profile_cap));
  }
  // Opponents are interchangeable, so only sorted tuples of policy codes are
  // visited. Fall back to symmetric profiles when the tuples would not fit.
  double tuples = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    tuples *= static_cast<double>(per_player + k) / static_cast<double>(k + 1);
  }
  const bool asymmetric = tuples <= static_cast<double>(options.profile_cap);

  std::vector<StationaryPolicy> family;
  family.reserve(per_player);
  for (std::uint64_t code = 0; code < per_player; ++code) {
    family.push_back(StationaryPolicy::from_own_state_bits(rounds, n, code));
  }

  if (!asymmetric) {
    for (const auto& pol : family) {
      std::fill(opponents.begin(), opponents.end(), pol);
      if (probe()) return report;
    }
    return report;
  }

  std::vector<std::uint64_t> idx(m, 0);
  while (true) {
    for (std::size_t k = 0; k < m; ++k) opponents[k] = family[idx[k]];
    if (probe()) return report;
    // Next non-decreasing tuple.
    std::size_t k = m;
    while (k > 0 && idx[k - 1] == per_player - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < m; ++j) idx[j] = idx[k - 1];
  }
  return report;
}

double equilibrium_switching_rate(const MultiPlayerGame& game, EquilibriumKind kind,
                                  double lo, double hi, double tol,
                                  const EquilibriumOptions& options) {
  auto holds = [&](double rate) {
    return check_equilibrium(game.with_rate(rate), kind, options).holds;
  };
  return bisect_monotone(holds, lo, hi, tol);
}

}  // namespace flux
