#pragma once

#include <functional>
#include <string>
#include <vector>

namespace flux {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::size_t checks = 0;  ///< individual comparisons made
  std::string detail;      ///< first failures, or a short summary
};

struct Criterion {
  int id;
  std::string title;
  std::function<CriterionResult()> run;
};

/// Closed forms checked against the backward-induction and brute-force
/// oracles, one entry per acceptance criterion.
std::vector<Criterion> acceptance_criteria();

/// Penalty rates probed for a (T, p) grid point: every regime boundary
/// (1/(2p), 1, each history threshold, the first-round threshold) shifted by
/// +-1e-4, plus one interior point of every regime.
std::vector<double> probe_rates(int rounds, double p);

/// Cost-gap monotonicity as other players' zero reports grow, checked on small
/// games and reported for information only (not a pass/fail criterion).
std::string cost_gap_monotonicity_report();

}  // namespace flux
