#include "flux/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace flux {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "game", "T",    "p",   "r",   "D",     "n",     "C",      "alpha", "model",
    "trials", "seed", "kind", "tol", "d_min", "d_max", "policy", "levels"};

const std::set<std::string> kPolicies = {"optimal", "honest", "lying-till-end",
                                         "lying-till-busted"};

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ValidationError(key + ": " + what);
}

double get_double(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "expected a finite number");
  return x;
}

std::int64_t get_int(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) {
      return static_cast<std::int64_t>(x);
    }
  }
  fail(key, "expected an integer");
}

std::string get_string(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

json override_value(const std::string& raw) {
  try {
    auto v = json::parse(raw);
    if (v.is_number() || v.is_boolean()) return v;
  } catch (const json::parse_error&) {
  }
  // Forms JSON rejects but a shell user types, such as ".5" or "1.".
  char* end = nullptr;
  const double x = std::strtod(raw.c_str(), &end);
  if (!raw.empty() && end == raw.c_str() + raw.size() && std::isfinite(x)) return x;
  return raw;
}

SignalModel parse_points(const json& points, double gross) {
  if (!points.is_array()) fail("model", "empirical points must be an array of [value, probability]");
  std::vector<SupportPoint> pts;
  for (const auto& row : points) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      fail("model", "each empirical point must be [value, probability]");
    }
    pts.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  try {
    return SignalModel::empirical(std::move(pts), gross);
  } catch (const ValidationError& e) {
    fail("model", e.what());
  }
}

Scenario build(json j, const ScenarioOverrides& overrides,
               const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError("scenario: top level must be a JSON object");
  bool model_from_flag = false;
  for (const auto& [key, raw] : overrides) {
    j[key] = override_value(raw);
    if (key == "model") model_from_flag = true;
  }
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.count(key)) fail(key, "unknown scenario key");
    if (value.is_null()) fail(key, "value must not be null");
  }

  Scenario s;
  if (j.contains("D")) {
    s.gross = get_double(j, "D");
    if (!(s.gross > 0.0)) fail("D", "gross consumption must be positive");
  }
  if (j.contains("game")) {
    const auto g = get_string(j, "game");
    if (g == "single") {
      s.game = GameKind::Single;
    } else if (g == "multi") {
      s.game = GameKind::Multi;
    } else {
      fail("game", "expected single or multi, got '" + g + "'");
    }
  } else if (j.contains("n") || j.contains("C")) {
    s.game = GameKind::Multi;
  }
  if (j.contains("T")) {
    const auto t = get_int(j, "T");
    if (t <= 1) fail("T", "the game needs T > 1 rounds, got " + std::to_string(t));
    if (t > 100000) fail("T", "at most 100000 rounds supported");
    s.rounds = static_cast<int>(t);
  }
  if (j.contains("p")) {
    s.p = get_double(j, "p");
    if (!(*s.p > 0.0 && *s.p < 1.0)) fail("p", "must lie strictly in (0, 1)");
  }
  if (j.contains("r")) {
    s.rate = get_double(j, "r");
    if (*s.rate < 0.0) fail("r", "penalty rate must be nonnegative");
  }
  if (j.contains("n")) {
    const auto n = get_int(j, "n");
    if (n < 2) fail("n", "the game needs n >= 2 players, got " + std::to_string(n));
    if (n > 64) fail("n", "at most 64 players supported");
    s.players = static_cast<int>(n);
  }
  if (j.contains("C")) {
    s.overhead = get_double(j, "C");
    if (!(*s.overhead > 0.0)) fail("C", "overhead cost must be positive");
  }
  if (s.game == GameKind::Multi) {
    if (!s.players) fail("n", "missing field (required for a multi-player game)");
    if (!s.overhead) s.overhead = *s.players * s.gross;
    if (*s.overhead < *s.players * s.gross * (1.0 - 1e-12)) {
      fail("C", "overhead must satisfy C >= n*D (got C=" + format_number(*s.overhead) +
                    ", n*D=" + format_number(*s.players * s.gross) + ")");
    }
  }
  if (j.contains("alpha")) {
    s.alpha = get_double(j, "alpha");
    if (!(*s.alpha > 0.0 && *s.alpha <= 1.0)) fail("alpha", "must lie in (0, 1]");
  }
  if (j.contains("trials")) {
    const auto t = get_int(j, "trials");
    if (t < 1) fail("trials", "must be at least 1");
    s.trials = static_cast<std::uint64_t>(t);
  }
  if (j.contains("seed")) {
    const auto& v = j.at("seed");
    if (v.is_number_unsigned()) {
      s.seed = v.get<std::uint64_t>();
    } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      s.seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else {
      fail("seed", "expected a nonnegative 64-bit integer");
    }
  }
  if (j.contains("kind")) {
    const auto k = get_string(j, "kind");
    if (k == "ne") {
      s.kind = EquilibriumKind::Nash;
    } else if (k == "dse") {
      s.kind = EquilibriumKind::Dominant;
    } else {
      fail("kind", "expected ne or dse, got '" + k + "'");
    }
  }
  if (j.contains("tol")) {
    s.tol = get_double(j, "tol");
    if (!(s.tol > 0.0)) fail("tol", "must be positive");
  }
  if (j.contains("d_min")) {
    s.d_min = get_double(j, "d_min");
    if (!(*s.d_min > 0.0)) fail("d_min", "must be positive");
  }
  if (j.contains("d_max")) {
    s.d_max = get_double(j, "d_max");
    if (s.d_min && *s.d_max < *s.d_min) fail("d_max", "must be at least d_min");
    if (!(*s.d_max > 0.0)) fail("d_max", "must be positive");
  }
  if (j.contains("policy")) {
    s.policy = get_string(j, "policy");
    if (!kPolicies.count(s.policy)) {
      fail("policy", "expected optimal, honest, lying-till-end or lying-till-busted");
    }
  }
  if (j.contains("levels")) {
    const auto l = get_int(j, "levels");
    if (l < 2 || l > 100000) fail("levels", "must lie in [2, 100000]");
    s.levels = static_cast<int>(l);
  }

  if (j.contains("model")) {
    const auto& m = j.at("model");
    if (m.is_object()) {
      if (!m.contains("empirical") || m.size() != 1) {
        fail("model", "object form must be {\"empirical\": [[value, probability], ...]}");
      }
      s.model_kind = ModelKind::Empirical;
      s.model_value = parse_points(m.at("empirical"), s.gross);
    } else if (m.is_string()) {
      const auto text = m.get<std::string>();
      if (text == "bernoulli") {
        s.model_kind = ModelKind::Bernoulli;
      } else if (text == "uniform") {
        s.model_kind = ModelKind::Uniform;
        s.model_value = SignalModel::uniform(s.gross);
      } else if (text.rfind("empirical:", 0) == 0 && text.size() > 10) {
        s.model_kind = ModelKind::Empirical;
        std::filesystem::path file = text.substr(10);
        if (file.is_relative() && !model_from_flag) file = base_dir / file;
        try {
          s.model_value = load_empirical_model(file, s.gross);
        } catch (const ValidationError& e) {
          fail("model", e.what());
        }
      } else {
        fail("model", "unknown model kind '" + text +
                          "' (expected bernoulli, uniform or empirical:PATH)");
      }
    } else {
      fail("model", "expected a string or an object");
    }
  }
  if (s.model_kind == ModelKind::Bernoulli && s.p) {
    s.model_value = SignalModel::bernoulli(*s.p, s.gross);
  }
  return s;
}

}  // namespace

int Scenario::require_rounds() const {
  if (!rounds) fail("T", "missing field");
  return *rounds;
}

double Scenario::require_p() const {
  if (!p) fail("p", "missing field");
  return *p;
}

double Scenario::require_rate() const {
  if (!rate) fail("r", "missing field");
  return *rate;
}

int Scenario::require_players() const {
  if (!players) fail("n", "missing field");
  return *players;
}

double Scenario::require_overhead() const {
  if (!overhead) return require_players() * gross;
  return *overhead;
}

const SignalModel& Scenario::model() const {
  if (!model_value) fail("p", "missing field (required by the bernoulli model)");
  return *model_value;
}

SinglePlayerGame Scenario::single_game() const {
  return SinglePlayerGame(require_rounds(), require_rate(), model());
}

MultiPlayerGame Scenario::multi_game() const {
  return MultiPlayerGame(require_players(), require_overhead(), require_rounds(),
                         require_rate(), model());
}

Scenario parse_scenario(const std::filesystem::path& path,
                        const ScenarioOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), overrides, path.parent_path());
}

Scenario parse_scenario_text(const std::string& text, const ScenarioOverrides& overrides,
                             const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
  }
  return build(std::move(j), overrides, base_dir.empty() ? "." : base_dir);
}

Scenario scenario_from_overrides(const ScenarioOverrides& overrides) {
  return build(json::object(), overrides, ".");
}

SignalModel load_empirical_model(const std::filesystem::path& path, double gross) {
  std::ifstream in(path);
  if (!in) throw ValidationError("empirical model file " + path.string() + " cannot be opened");
  std::vector<SupportPoint> pts;
  std::string line;
  int lineno = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const bool header_allowed = first_row;
    first_row = false;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected value,probability");
    }
    try {
      const double v = std::stod(line.substr(0, comma));
      const double pr = std::stod(line.substr(comma + 1));
      pts.push_back({v, pr});
    } catch (const std::exception&) {
      if (header_allowed) continue;  // header row
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected numeric value,probability");
    }
  }
  return SignalModel::empirical(std::move(pts), gross);
}

}  // namespace flux
