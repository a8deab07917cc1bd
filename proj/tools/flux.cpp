// flux: command-line front end for the threshold, classification, simulation
// and equilibrium tools. Exit codes: 0 success, 1 invalid input, 2 state cap
// exceeded, 3 verification failure.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flux/dp_oracle.hpp"
#include "flux/figures.hpp"
#include "flux/multi_player.hpp"
#include "flux/reduction.hpp"
#include "flux/scenario.hpp"
#include "flux/simulator.hpp"
#include "flux/single_player.hpp"
#include "flux/verification.hpp"

namespace {

using namespace flux;

constexpr int kExitInvalid = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitVerifyFailed = 3;

struct Inputs {
  std::string scenario;
  std::string out;
  std::string which;
  std::map<std::string, std::string> raw;
  std::vector<std::pair<std::string, CLI::Option*>> flags;
};

// Flags that mirror scenario keys.
const std::vector<std::pair<std::string, std::string>> kScenarioFlags = {
    {"--game", "game"},   {"--T", "T"},         {"--p", "p"},
    {"--r", "r"},         {"--d", "D"},         {"--n", "n"},
    {"--c", "C"},         {"--alpha", "alpha"}, {"--model", "model"},
    {"--trials", "trials"}, {"--seed", "seed"}, {"--kind", "kind"},
    {"--tol", "tol"},     {"--d-min", "d_min"}, {"--d-max", "d_max"},
    {"--policy", "policy"}, {"--levels", "levels"}};

void add_scenario_flags(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--scenario", in.scenario, "JSON scenario file");
  for (const auto& [flag, key] : kScenarioFlags) {
    auto* opt = cmd->add_option(flag, in.raw[key], "scenario field " + key);
    in.flags.emplace_back(key, opt);
  }
}

Scenario load(const Inputs& in) {
  ScenarioOverrides overrides;
  for (const auto& [key, opt] : in.flags) {
    if (opt->count() > 0) overrides[key] = in.raw.at(key);
  }
  if (!in.scenario.empty()) return parse_scenario(in.scenario, overrides);
  return scenario_from_overrides(overrides);
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("out: cannot open " + path + " for writing");
  fn(file);
  if (!file) throw ValidationError("out: failed writing " + path);
}

void print(const std::string& key, const std::string& value) {
  std::cout << key << '=' << value << '\n';
}

void print(const std::string& key, double value) { print(key, format_number(value)); }

SolveOptions solve_options() { return SolveOptions{state_cap_from_env(), kTieTolerance}; }

EquilibriumOptions equilibrium_options() {
  EquilibriumOptions opts;
  opts.solve.state_cap = state_cap_from_env();
  return opts;
}

// Finite report grid matching a scenario's signal model.
std::pair<SignalModel, ReportGrid> discrete_model(const Scenario& s) {
  if (s.model_kind == ModelKind::Uniform) {
    auto model = discretize_uniform(s.gross, s.levels);
    std::vector<double> levels;
    for (const auto& pt : model.finite_support()) levels.push_back(pt.value);
    return {model, ReportGrid(levels)};
  }
  const auto& model = s.model();
  if (model.is_bernoulli()) return {model, ReportGrid::binary(s.gross)};
  std::vector<double> levels{0.0};
  for (const auto& pt : model.finite_support()) {
    if (pt.value > levels.back()) levels.push_back(pt.value);
  }
  if (levels.back() < s.gross) levels.push_back(s.gross);
  return {model, ReportGrid(levels)};
}

int cmd_threshold(const Inputs& in) {
  const auto s = load(in);
  const int rounds = s.require_rounds();
  print("game", s.game == GameKind::Single ? "single" : "multi");
  print("T", std::to_string(rounds));
  std::optional<double> exact;
  if (s.game == GameKind::Single) {
    if (s.alpha) {
      const auto t = alpha_threshold_single(rounds, s.model(), AlphaLevel(*s.alpha));
      print("model", s.model().describe());
      print("alpha", *s.alpha);
      print("threshold_sufficient", to_string(t));
      if (t.is_finite()) exact = t.value();
    } else {
      const double p = s.require_p();
      exact = truthful_threshold(rounds, p);
      print("p", p);
      print("threshold", *exact);
    }
    if (s.d_min && s.d_max && exact) {
      print("threshold_range_robust", range_robust_scale(*exact, *s.d_min, *s.d_max));
    }
    return 0;
  }
  const int n = s.require_players();
  const double C = s.require_overhead();
  print("kind", to_string(s.kind));
  print("n", std::to_string(n));
  print("C", C);
  print("D", s.gross);
  if (s.alpha) {
    const auto t = alpha_threshold_multi(s.kind, rounds, s.model(), AlphaLevel(*s.alpha), n, C,
                                         s.gross);
    print("model", s.model().describe());
    print("alpha", *s.alpha);
    print("threshold_sufficient", to_string(t));
    return 0;
  }
  const double p = s.require_p();
  print("p", p);
  print("threshold", s.kind == EquilibriumKind::Nash ? ne_threshold(rounds, p, n, C, s.gross)
                                                      : dse_threshold(rounds, p, n, C, s.gross));
  return 0;
}

int cmd_classify(const Inputs& in) {
  const auto s = load(in);
  const int rounds = s.require_rounds();
  const double p = s.require_p();
  const double r = s.require_rate();
  print("T", std::to_string(rounds));
  print("p", p);
  print("r", r);
  print("strategy", to_string(classify_strategy(rounds, p, r)));
  print("first_round_threshold", truthful_threshold(rounds, p));
  return 0;
}

int cmd_curve(const Inputs& in) {
  const auto s = load(in);
  const int rounds = s.require_rounds();
  const double p = s.require_p();
  const auto curve = threshold_curve(rounds, p);
  with_output(in.out, [&](std::ostream& out) {
    out << "# threshold curve T=" << rounds << " p=" << format_number(p) << '\n';
    out << "rounds_left,no_history,truthful_history\n";
    for (const auto& row : curve.rows) {
      out << row.rounds_left << ',' << to_string(row.no_history) << ','
          << format_number(row.truthful_history) << '\n';
    }
  });
  return 0;
}

void print_summary(const CostSummary& summary, const std::string& header) {
  std::cout << header << "player,mean,standard_error,trials,seed\n";
  for (std::size_t i = 0; i < summary.mean.size(); ++i) {
    std::cout << i << ',' << format_number(summary.mean[i]) << ','
              << format_number(summary.standard_error[i]) << ',' << summary.trials << ','
              << summary.seed << '\n';
  }
}

int simulate_single(const Inputs& in, const Scenario& s) {
  const auto [model, grid] = discrete_model(s);
  const SinglePlayerGame game(s.require_rounds(), s.require_rate(), model);
  std::ostringstream header;
  header << "# simulate game=single T=" << game.rounds() << " r=" << format_number(game.rate())
         << " model=" << model.describe() << " policy=" << s.policy << '\n';
  std::optional<Policy> policy;
  if (s.policy == "optimal") {
    auto sol = solve_single(game, grid, solve_options());
    header << "# oracle expected cost=" << format_number(sol.values.root()) << '\n';
    policy = std::move(sol.policy);
  } else if (s.policy == "honest") {
    policy = basic_policy(BasicStrategy::HonestTillEnd, grid, game.rounds());
  } else if (s.policy == "lying-till-end") {
    policy = basic_policy(BasicStrategy::LyingTillEnd, grid, game.rounds());
  } else {
    policy = basic_policy(BasicStrategy::LyingTillBusted, grid, game.rounds());
  }
  if (!in.out.empty()) {
    const auto trace = run_game(game, *policy, s.seed);
    with_output(in.out, [&](std::ostream& out) { write_trace_csv(trace, out); });
  }
  print_summary(monte_carlo(game, *policy, s.trials, s.seed), header.str());
  return 0;
}

int simulate_multi(const Inputs& in, const Scenario& s) {
  const auto game = s.multi_game();
  const int n = game.players();
  std::vector<PlayerPolicy> policies;
  auto fill = [&](const StationaryPolicy& pol) { policies.assign(n, pol); };
  if (s.policy == "lying-till-end") {
    fill(StationaryPolicy::lying_till_end(game.rounds(), n));
  } else if (s.policy == "lying-till-busted") {
    fill(StationaryPolicy::lying_till_busted(game.rounds(), n));
  } else {
    fill(StationaryPolicy::honest_till_end(game.rounds(), n));
  }
  if (s.policy == "optimal") {
    // Player 0 best-responds to truthful opponents.
    const std::vector<StationaryPolicy> opponents(
        n - 1, StationaryPolicy::honest_till_end(game.rounds(), n));
    MultiSolveOptions opts;
    opts.state_cap = state_cap_from_env();
    policies[0] = best_response(game, 0, opponents, opts).policy;
  }
  std::ostringstream header;
  header << "# simulate game=multi n=" << n << " T=" << game.rounds()
         << " r=" << format_number(game.rate()) << " C=" << format_number(game.overhead())
         << " model=" << game.model().describe() << " policy=" << s.policy << '\n';
  if (!in.out.empty()) {
    const auto trace = run_game(game, policies, s.seed);
    with_output(in.out, [&](std::ostream& out) { write_trace_csv(trace, out); });
  }
  print_summary(monte_carlo(game, policies, s.trials, s.seed), header.str());
  return 0;
}

int cmd_simulate(const Inputs& in) {
  const auto s = load(in);
  return s.game == GameKind::Single ? simulate_single(in, s) : simulate_multi(in, s);
}

int cmd_equilibrium(const Inputs& in) {
  const auto s = load(in);
  const MultiPlayerGame game(s.require_players(), s.require_overhead(), s.require_rounds(),
                             s.rate.value_or(0.0), s.model());
  const auto opts = equilibrium_options();
  if (!s.rate) {
    const double p = s.require_p();
    const double closed = s.kind == EquilibriumKind::Nash
                              ? ne_threshold(game.rounds(), p, game.players(), game.overhead(),
                                             game.gross())
                              : dse_threshold(game.rounds(), p, game.players(),
                                              game.overhead(), game.gross());
    const double found =
        equilibrium_switching_rate(game, s.kind, 0.0, 2.0 * closed + 1.0, s.tol, opts);
    print("kind", to_string(s.kind));
    print("threshold", closed);
    print("switching_rate", found);
    return 0;
  }
  const auto report = check_equilibrium(game, s.kind, opts);
  print("kind", to_string(s.kind));
  print("r_tested", report.rate_tested);
  print("threshold", report.threshold);
  print("holds", report.holds ? "true" : "false");
  print("profiles_checked", std::to_string(report.profiles_checked));
  if (report.witness) {
    const auto& w = *report.witness;
    print("witness_player", std::to_string(w.player));
    print("witness_round_chrono", std::to_string(w.round_chrono));
    print("witness_rounds_left", std::to_string(w.rounds_left));
    print("witness_report", w.report);
    print("witness_improvement", w.improvement);
    print("witness_opponents", w.opponent_profile);
  }
  return 0;
}

int cmd_figure(const Inputs& in) {
  const auto id = parse_figure_id(in.which);
  with_output(in.out, [&](std::ostream& out) { write_figure_csv(figure_data(id), out); });
  return 0;
}

int cmd_verify() {
  bool all = true;
  for (const auto& c : acceptance_criteria()) {
    const auto result = c.run();
    all = all && result.passed;
    std::cout << (result.passed ? "PASS" : "FAIL") << " [" << result.id << "] " << result.title
              << ": " << result.detail << '\n';
  }
  std::cout << "INFO cost-gap monotonicity: " << cost_gap_monotonicity_report() << '\n';
  return all ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flux: penalty-rate thresholds, strategies and equilibria"};
  app.require_subcommand(1);
  Inputs in;

  auto* threshold = app.add_subcommand("threshold", "Closed-form truthfulness threshold");
  auto* classify = app.add_subcommand("classify", "Optimal strategy regime at rate r");
  auto* curve = app.add_subcommand("curve", "Per-round critical thresholds as CSV");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of a policy");
  auto* equilibrium = app.add_subcommand("equilibrium", "Brute-force NE/DSE check");
  auto* figure = app.add_subcommand("figure", "Emit figure data as CSV");
  auto* verify = app.add_subcommand("verify", "Run every closed-form vs oracle check");

  for (auto* cmd : {threshold, classify, curve, simulate, equilibrium}) {
    add_scenario_flags(cmd, in);
  }
  for (auto* cmd : {curve, simulate, figure}) {
    cmd->add_option("--out", in.out, "output path (stdout when omitted)");
  }
  figure->add_option("--which", in.which, "fig2, fig3 or fig4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*threshold) return cmd_threshold(in);
    if (*classify) return cmd_classify(in);
    if (*curve) return cmd_curve(in);
    if (*simulate) return cmd_simulate(in);
    if (*equilibrium) return cmd_equilibrium(in);
    if (*figure) return cmd_figure(in);
    if (*verify) return cmd_verify();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const PolicyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacity;
  }
  return kExitInvalid;
}
