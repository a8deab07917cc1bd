#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "flux/multi_player.hpp"
#include "flux/signal_model.hpp"
#include "flux/single_player.hpp"
#include "flux/simulator.hpp"

namespace flux {

enum class ModelKind { Bernoulli, Uniform, Empirical };

/// Validated inputs of one CLI invocation. Fields a command does not need may
/// stay empty; the accessors below throw ValidationError naming the missing
/// key.
struct Scenario {
  GameKind game = GameKind::Single;
  std::optional<int> rounds;
  std::optional<double> p;
  std::optional<double> rate;
  double gross = 1.0;
  std::optional<int> players;
  std::optional<double> overhead;
  std::optional<double> alpha;
  ModelKind model_kind = ModelKind::Bernoulli;
  std::optional<SignalModel> model_value;  ///< empty only for Bernoulli without p
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  EquilibriumKind kind = EquilibriumKind::Nash;
  double tol = 1e-6;
  std::optional<double> d_min;
  std::optional<double> d_max;
  std::string policy = "optimal";
  int levels = 11;

  int require_rounds() const;
  double require_p() const;
  double require_rate() const;
  int require_players() const;
  double require_overhead() const;
  const SignalModel& model() const;
  SinglePlayerGame single_game() const;
  MultiPlayerGame multi_game() const;
};

/// Raw command-line values keyed by scenario field name ("T", "p", ...).
/// They replace file values before validation.
using ScenarioOverrides = std::map<std::string, std::string>;

/// Reads a JSON scenario file. Relative empirical model paths resolve against
/// the file's directory.
Scenario parse_scenario(const std::filesystem::path& path,
                        const ScenarioOverrides& overrides = {});
Scenario parse_scenario_text(const std::string& json,
                             const ScenarioOverrides& overrides = {},
                             const std::filesystem::path& base_dir = ".");
/// Scenario built from overrides alone.
Scenario scenario_from_overrides(const ScenarioOverrides& overrides);

/// Loads "value,probability" rows ('#' comments and a header row allowed).
SignalModel load_empirical_model(const std::filesystem::path& path, double gross);

}  // namespace flux
