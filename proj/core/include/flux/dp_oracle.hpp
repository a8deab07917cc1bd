#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "flux/common.hpp"
#include "flux/policy.hpp"
#include "flux/single_player.hpp"

namespace flux {

struct SolveOptions {
  std::uint64_t state_cap = kDefaultStateCap;
  double tie_tolerance = kTieTolerance;
};

struct SingleSolution {
  Policy policy;
  ValueTable values;
};

/// Backward induction over rounds for one player on a discrete report grid.
///
/// Every support point of the signal model must be a grid level. The policy is
/// defined for each (rounds_left, history, signal) with positive signal
/// probability; a report within `tie_tolerance` of the best expected cost loses
/// to any larger report. Throws CapacityError when the state count exceeds
/// `state_cap` and ValidationError on a grid/support mismatch.
SingleSolution solve_single(const SinglePlayerGame& game, const ReportGrid& grid,
                            const SolveOptions& options = {});

/// Number of (rounds_left, history, signal) states solve_single would visit.
std::uint64_t single_state_count(int rounds, std::size_t grid_size,
                                 std::size_t support_size);

using PolicyPredicate = std::function<bool(const Policy&)>;

/// Bisects the penalty rate of a Bernoulli(p) game on the {0, D} grid until
/// the switching point of `predicate` is bracketed within `tol`. The predicate
/// must be false at `lo`, true at `hi` and monotone in between.
double bisect_threshold(int rounds, double p, double gross,
                        const PolicyPredicate& predicate, double lo, double hi,
                        double tol, const SolveOptions& options = {});

struct ReachedState {
  int rounds_left;
  std::optional<std::size_t> history;  ///< grid index; empty in the first round
};

/// States visited with positive probability when the player follows `policy`
/// from the first round, considering every signal the policy defines.
std::vector<ReachedState> reachable_states(const Policy& policy);

/// Smallest report the policy makes in any reachable state.
double min_reachable_report(const Policy& policy);

/// True when the policy reports D in every reachable state.
bool is_honest_till_end(const Policy& policy);

}  // namespace flux
