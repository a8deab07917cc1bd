#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace flux {

/// Two expected costs closer than this are treated as equal; the tie then
/// resolves toward the larger (more truthful) report. Rate comparisons in the
/// closed-form classifier use the same slack so that it agrees with the
/// backward-induction oracle at regime boundaries.
inline constexpr double kTieTolerance = 1e-9;

/// Default cap on the number of (round, history, signal) states a solver may
/// allocate. Overridable from the CLI through FLUX_STATE_CAP.
inline constexpr std::uint64_t kDefaultStateCap = 10'000'000;

/// Input that violates a model invariant. The message names the offending
/// field first ("T: ...").
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Busted probability of exactly 1: every threshold formula degenerates.
class DegenerateProbabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A solver would exceed its configured state cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A policy was queried at a state it does not define.
class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A penalty rate that may be "no finite threshold". Used wherever the
/// mechanism has no finite rate that forces truthfulness (a zero history before
/// the last round, alpha = 1 against a continuous signal).
class Threshold {
 public:
  static Threshold finite(double rate);
  static Threshold unbounded() { return Threshold{}; }

  bool is_finite() const { return finite_; }
  /// Throws std::logic_error on an unbounded threshold.
  double value() const;

  /// True when `rate` meets this threshold (never for an unbounded one).
  bool satisfied_by(double rate) const { return finite_ && rate >= rate_; }

  friend bool operator==(const Threshold&, const Threshold&) = default;

 private:
  Threshold() = default;
  bool finite_ = false;
  double rate_ = 0.0;
};

std::string to_string(const Threshold& t);

/// Reads FLUX_STATE_CAP, falling back to kDefaultStateCap.
std::uint64_t state_cap_from_env();

/// Bisection on a predicate that is false at `lo`, true at `hi` and monotone in
/// between. Returns the smallest probed value known to satisfy the predicate,
/// within `tol` of the switching point.
double bisect_monotone(const std::function<bool(double)>& predicate, double lo,
                       double hi, double tol);

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

/// Fixed-notation decimal with 9 significant digits ("3.00000000",
/// "0.714285714"). Non-finite values print as "inf"/"-inf"/"nan".
std::string format_number(double value);

}  // namespace flux
