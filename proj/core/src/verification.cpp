#include "flux/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "flux/dp_oracle.hpp"
#include "flux/figures.hpp"
#include "flux/multi_player.hpp"
#include "flux/reduction.hpp"
#include "flux/simulator.hpp"
#include "flux/single_player.hpp"

namespace flux {
namespace {

constexpr double kGridP[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
constexpr std::size_t kMaxReported = 5;
constexpr std::uint64_t kMasterSeed = 0x5eed'f1c5ULL;

// Collects failures and keeps the first few for the report.
class Tally {
 public:
  Tally(int id, std::string title) { result_.id = id; result_.title = std::move(title); }

  void check(bool ok, const std::string& what) {
    ++result_.checks;
    if (ok) return;
    ++failures_;
    if (failures_ <= kMaxReported) lines_.push_back(what);
  }

  CriterionResult finish(const std::string& summary) {
    result_.passed = failures_ == 0;
    if (result_.passed) {
      result_.detail = summary;
    } else {
      std::ostringstream out;
      out << failures_ << " of " << result_.checks << " checks failed";
      for (const auto& l : lines_) out << "; " << l;
      result_.detail = out.str();
    }
    return result_;
  }

 private:
  CriterionResult result_;
  std::size_t failures_ = 0;
  std::vector<std::string> lines_;
};

std::string at(int rounds, double p) {
  return "T=" + std::to_string(rounds) + " p=" + format_number(p);
}

std::string at(int rounds, double p, double rate) {
  return at(rounds, p) + " r=" + format_number(rate);
}

CriterionResult first_round_threshold() {
  Tally tally(1, "first-round threshold vs backward-induction bisection");
  double worst = 0.0;
  for (int t = 2; t <= 7; ++t) {
    for (double p : kGridP) {
      const double closed = truthful_threshold(t, p);
      const double found = bisect_threshold(
          t, p, 1.0, [](const Policy& pol) { return is_honest_till_end(pol); }, 0.0,
          2.0 * closed + 1.0, 1e-9 * closed);
      const double rel = std::abs(found - closed) / closed;
      worst = std::max(worst, rel);
      tally.check(rel <= 1e-6, at(t, p) + ": bisected " + format_number(found) +
                                   " vs " + format_number(closed));
    }
  }
  return tally.finish("54 grid points, worst relative error " + format_number(worst));
}

CriterionResult regime_classification() {
  Tally tally(2, "strategy regimes vs backward-induction policies");
  const ReportGrid grid = ReportGrid::binary(1.0);
  for (int t = 2; t <= 7; ++t) {
    for (double p : kGridP) {
      const auto model = SignalModel::bernoulli(p, 1.0);
      for (double r : probe_rates(t, p)) {
        const auto strategy = classify_strategy(t, p, r);
        const auto solved = solve_single(SinglePlayerGame(t, r, model), grid).policy;
        tally.check(induced_policy(strategy, t, 1.0) == solved,
                    at(t, p, r) + ": " + to_string(strategy) + " disagrees with the oracle");
      }
    }
  }
  return tally.finish("every probed rate matched state by state");
}

CriterionResult history_threshold_branches() {
  Tally tally(3, "history threshold branches");
  constexpr double tol = 1e-12;
  for (double p : {0.55, 0.7, 0.9}) {
    tally.check(std::abs(history_threshold(1, p) - 1.0) <= tol,
                "p=" + format_number(p) + ": h(1)=" + format_number(history_threshold(1, p)));
    for (int t = 2; t <= 10; ++t) {
      const double h = history_threshold(t, p);
      tally.check(std::abs(h - 1.0 / (2.0 * p)) <= tol,
                  "p=" + format_number(p) + " t=" + std::to_string(t) + ": h=" +
                      format_number(h) + " vs 1/(2p)");
    }
  }
  for (double p : {0.1, 0.3, 0.5}) {
    const double cap = 1.0 / (2.0 * p);
    for (int t = 1; t <= 10; ++t) {
      const double h = history_threshold(t, p);
      tally.check(h < cap, "p=" + format_number(p) + " t=" + std::to_string(t) + ": h=" +
                               format_number(h) + " is not below 1/(2p)=" + format_number(cap));
      if (t > 1) {
        const double prev = history_threshold(t - 1, p);
        tally.check(h > prev, "p=" + format_number(p) + ": h(" + std::to_string(t) + ")=" +
                                  format_number(h) + " does not exceed h(" +
                                  std::to_string(t - 1) + ")=" + format_number(prev));
      }
    }
  }
  return tally.finish("both branches hold at 1e-12");
}

CriterionResult threshold_limit() {
  Tally tally(4, "first-round threshold decreases in T toward 1/p");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  int strict = 0;
  for (double p : {0.3, 0.5, 0.7}) {
    const double q = 1.0 - p;
    // The threshold exceeds 1/p by q^(T-1) / (1 - q^(T-1)). Once the drop
    // between consecutive T is within a few ulps of 1/p, doubles cannot show
    // it, so there only non-increase up to rounding is required.
    auto excess = [&](int t) { return std::pow(q, t - 1) / (1.0 - std::pow(q, t - 1)); };
    const double resolvable = 64.0 * eps / p;
    for (int t = 3; t <= 200; ++t) {
      const double prev = truthful_threshold(t - 1, p);
      const double cur = truthful_threshold(t, p);
      const bool visible = excess(t - 1) - excess(t) > resolvable;
      strict += visible;
      const bool ok = visible ? cur < prev : cur <= prev + 4.0 * eps * prev;
      tally.check(ok, at(t, p) + ": " + format_number(cur) + " vs " + format_number(prev));
    }
    const double gap = std::abs(truthful_threshold(200, p) - 1.0 / p);
    tally.check(gap < 1e-6, "p=" + format_number(p) + ": |r(200) - 1/p| = " + format_number(gap));
  }
  return tally.finish("strictly decreasing on " + std::to_string(strict) +
                      " resolvable steps, non-increasing to T = 200, limit within 1e-6");
}

CriterionResult equilibrium_figure() {
  Tally tally(5, "equilibrium threshold figure data");
  const auto table = figure_data(FigureId::Fig4);
  const double ps[] = {1.0 / 3.0, 2.0 / 3.0};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const int t = static_cast<int>(row[0]);
    for (int k = 0; k < 2; ++k) {
      const double p = ps[k];
      const double ne = row[1 + 2 * k];
      const double dse = row[2 + 2 * k];
      tally.check(dse >= ne, at(t, p) + ": dse below ne");
      tally.check(ne == truthful_threshold(t, p), at(t, p) + ": ne differs from the single-player threshold");
      const double factor = (1.0 - std::pow(1.0 - p, 19)) / p;
      tally.check(std::abs(dse / ne - factor) <= 1e-9, at(t, p) + ": dse/ne ratio off");
      if (i > 0) {
        const auto& prev = table.rows[i - 1];
        tally.check(ne < prev[1 + 2 * k], at(t, p) + ": ne not decreasing");
        tally.check(dse < prev[2 + 2 * k], at(t, p) + ": dse not decreasing");
      }
    }
  }
  return tally.finish("29 rows x 2 probabilities consistent");
}

CriterionResult equilibrium_brute_force() {
  Tally tally(6, "equilibrium thresholds vs brute-force best responses");
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (int t : {2, 3, 4}) {
      for (double p : {0.3, 0.5, 0.7}) {
        const double C = n * 1.0;
        const auto model = SignalModel::bernoulli(p, 1.0);
        const MultiPlayerGame game(n, C, t, 0.0, model);
        for (auto kind : {EquilibriumKind::Nash, EquilibriumKind::Dominant}) {
          const double closed = kind == EquilibriumKind::Nash ? ne_threshold(t, p, n, C, 1.0)
                                                              : dse_threshold(t, p, n, C, 1.0);
          const std::string where = "n=" + std::to_string(n) + " " + at(t, p) + " " + to_string(kind);
          const double found =
              equilibrium_switching_rate(game, kind, 0.0, 2.0 * closed + 1.0, 1e-5);
          worst = std::max(worst, std::abs(found - closed));
          tally.check(std::abs(found - closed) <= 1e-3,
                      where + ": switching rate " + format_number(found) + " vs " +
                          format_number(closed));
          const auto below = check_equilibrium(game.with_rate(closed - 0.01), kind);
          tally.check(!below.holds && below.witness &&
                          below.witness->improvement > kTieTolerance,
                      where + ": no witness just below the threshold");
        }
      }
    }
  }
  return tally.finish("36 switching rates recovered, worst gap " + format_number(worst) +
                      "; every sub-threshold run produced a witness");
}

CriterionResult two_player_reduction() {
  Tally tally(7, "two-player NE threshold equals the scaled single-player threshold");
  const std::pair<double, double> costs[] = {{2.0, 1.0}, {3.0, 1.0}, {5.0, 2.0}, {7.5, 0.5}};
  for (int t = 2; t <= 7; ++t) {
    for (double p : kGridP) {
      for (auto [C, D] : costs) {
        const double lhs = ne_threshold(t, p, 2, C, D);
        const double rhs = (C / (2 * D)) * truthful_threshold(t, p);
        tally.check(lhs == rhs, at(t, p) + " C=" + format_number(C) + " D=" + format_number(D) +
                                    ": " + format_number(lhs) + " != " + format_number(rhs));
      }
    }
  }
  return tally.finish("exact equality on 216 parameter sets");
}

CriterionResult monte_carlo_consistency() {
  Tally tally(8, "Monte Carlo means vs oracle values");
  const ReportGrid grid = ReportGrid::binary(1.0);
  constexpr std::uint64_t trials = 100000;
  std::uint64_t index = 0;
  double worst = 0.0;
  for (int t = 2; t <= 4; ++t) {
    for (double p : kGridP) {
      const auto model = SignalModel::bernoulli(p, 1.0);
      for (double r : probe_rates(t, p)) {
        const SinglePlayerGame game(t, r, model);
        const auto sol = solve_single(game, grid);
        const auto summary = monte_carlo(game, sol.policy, trials, mix64(kMasterSeed + index++));
        const double gap = std::abs(summary.mean[0] - sol.values.root());
        const double allowed = 4.0 * summary.standard_error[0] + 1e-9;
        if (summary.standard_error[0] > 0.0) worst = std::max(worst, gap / summary.standard_error[0]);
        tally.check(gap <= allowed, at(t, p, r) + ": mean " + format_number(summary.mean[0]) +
                                        " vs " + format_number(sol.values.root()) + " (SE " +
                                        format_number(summary.standard_error[0]) + ")");
      }
      const SinglePlayerGame game(t, 1.0, model);
      const auto honest =
          monte_carlo(game, induced_policy(HonestTillEnd{}, t, 1.0), 1000, kMasterSeed);
      tally.check(honest.mean[0] == t * 1.0 && honest.standard_error[0] == 0.0,
                  at(t, p) + ": honest-till-end mean " + format_number(honest.mean[0]));
    }
  }
  return tally.finish(std::to_string(index) + " optimal policies within 4 SE (worst " +
                      format_number(worst) + " SE); honest-till-end exact");
}

CriterionResult alpha_truthfulness() {
  Tally tally(9, "alpha-truthfulness on a discretized uniform signal");
  const auto model = discretize_uniform(1.0, 11);
  std::vector<double> levels;
  for (const auto& pt : model.finite_support()) levels.push_back(pt.value);
  const ReportGrid grid(levels);
  for (int t = 2; t <= 5; ++t) {
    for (double a : {0.3, 0.5, 0.8}) {
      const double r = alpha_threshold_single(t, model, AlphaLevel(a)).value();
      const auto sol = solve_single(SinglePlayerGame(t, r, model), grid);
      const double low = min_reachable_report(sol.policy);
      tally.check(low >= a - 1e-12, "T=" + std::to_string(t) + " alpha=" + format_number(a) +
                                        ": reachable report " + format_number(low));
    }
  }
  return tally.finish("every reachable report at least alpha*D on 12 instances");
}

CriterionResult cost_gap_identities() {
  Tally tally(10, "cost-gap bound identities");
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (int n : {2, 3, 5, 20}) {
      for (double D : {1.0, 2.5}) {
        for (double scale : {1.0, 2.0}) {
          const double C = scale * n * D;
          for (double r : {0.0, 0.5, 1.0, 3.0}) {
            const double big_m = C / n * (1.0 - std::pow(1.0 - p, n - 1)) / p;
            const double expected = (1.0 - p) * big_m - p * r * D;
            const double got = delta_ec_bound(1, p, n, C, D, r);
            tally.check(std::abs(got - expected) <= 1e-12,
                        "p=" + format_number(p) + " n=" + std::to_string(n) + ": " +
                            format_number(got) + " vs " + format_number(expected));
          }
        }
      }
    }
  }
  for (int t : {1, 2}) {
    const double v = delta_ec_bound(t, 0.5, 2, 2.0, 1.0, 1.0);
    tally.check(std::abs(v) <= 1e-12, "t=" + std::to_string(t) + ": bound " + format_number(v));
  }
  return tally.finish("one-round identity on 320 parameter sets; zero at the balanced point");
}

}  // namespace

std::vector<double> probe_rates(int rounds, double p) {
  std::vector<double> bounds = {1.0 / (2.0 * p), 1.0, truthful_threshold(rounds, p)};
  for (int t = 1; t <= rounds; ++t) bounds.push_back(history_threshold(t, p));
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-6; }),
               bounds.end());

  std::vector<double> rates;
  for (double b : bounds) {
    rates.push_back(b - 1e-4);
    rates.push_back(b + 1e-4);
  }
  rates.push_back(bounds.front() / 2.0);
  for (std::size_t i = 1; i < bounds.size(); ++i) {
    rates.push_back((bounds[i - 1] + bounds[i]) / 2.0);
  }
  rates.push_back(bounds.back() + 1.0);
  std::sort(rates.begin(), rates.end());
  return rates;
}

std::vector<Criterion> acceptance_criteria() {
  return {
      {1, "first-round threshold vs backward-induction bisection", first_round_threshold},
      {2, "strategy regimes vs backward-induction policies", regime_classification},
      {3, "history threshold branches", history_threshold_branches},
      {4, "first-round threshold decreases in T toward 1/p", threshold_limit},
      {5, "equilibrium threshold figure data", equilibrium_figure},
      {6, "equilibrium thresholds vs brute-force best responses", equilibrium_brute_force},
      {7, "two-player NE threshold equals the scaled single-player threshold",
       two_player_reduction},
      {8, "Monte Carlo means vs oracle values", monte_carlo_consistency},
      {9, "alpha-truthfulness on a discretized uniform signal", alpha_truthfulness},
      {10, "cost-gap bound identities", cost_gap_identities},
  };
}

std::string cost_gap_monotonicity_report() {
  std::size_t cases = 0;
  std::size_t inside_violations = 0;
  std::size_t outside_violations = 0;
  for (int n : {2, 3}) {
    for (int t : {2, 3}) {
      for (double p : {0.3, 0.5, 0.7}) {
        const double C = n * 1.0;
        const double lo = C / (n * p);
        const double hi = dse_threshold(t, p, n, C, 1.0);
        std::vector<double> rates;
        for (int k = 0; k <= 4; ++k) rates.push_back(lo + (hi - lo) * k / 4.0);
        rates.push_back(0.5 * lo);
        rates.push_back(2.0 * hi);
        const std::vector<StationaryPolicy> opponents(
            n - 1, StationaryPolicy::lying_till_busted(t, n));
        for (double r : rates) {
          const bool inside = r >= lo && r <= hi;
          const MultiPlayerGame game(n, C, t, r, SignalModel::bernoulli(p, 1.0));
          const auto values = best_response(game, 0, opponents).values;
          for (int left = 1; left < t; ++left) {
            ++cases;
            double prev = -std::numeric_limits<double>::infinity();
            for (int zeros = 0; zeros < n; ++zeros) {
              std::vector<HistoryLevel> others(n - 1, HistoryLevel::Full);
              std::fill_n(others.begin(), zeros, HistoryLevel::Zero);
              const double gap = delta_ec(values, left, others);
              if (gap < prev - 1e-12) {
                (inside ? inside_violations : outside_violations) += 1;
                break;
              }
              prev = gap;
            }
          }
        }
      }
    }
  }
  return std::to_string(cases) + " (game, round) cases; non-monotone inside the regime: " +
         std::to_string(inside_violations) +
         "; outside it: " + std::to_string(outside_violations);
}

}  // namespace flux
