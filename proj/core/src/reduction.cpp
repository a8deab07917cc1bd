#include "flux/reduction.hpp"

#include <cmath>

#include "flux/single_player.hpp"

namespace flux {

AlphaLevel::AlphaLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha: must lie in (0, 1]");
  }
}

Threshold alpha_threshold_single(int rounds, const SignalModel& model,
                                 AlphaLevel alpha) {
  if (rounds < 2) throw ValidationError("T: the game needs T > 1 rounds");
  const double p = busted_probability(model, alpha.value());
  if (p <= 0.0) return Threshold::unbounded();
  if (p >= 1.0) {
    throw DegenerateProbabilityError(
        "alpha: every signal is at least alpha*D (busted probability 1); the "
        "threshold formula is degenerate");
  }
  return Threshold::finite(truthful_threshold(rounds, p));
}

Threshold uniform_alpha_threshold(int rounds, AlphaLevel alpha) {
  if (rounds < 2) throw ValidationError("T: the game needs T > 1 rounds");
  const double a = alpha.value();
  if (a >= 1.0) return Threshold::unbounded();
  return Threshold::finite((1.0 - std::pow(a, rounds)) /
                           ((1.0 - a) * (1.0 - std::pow(a, rounds - 1))));
}

double range_robust_scale(double rate, double d_min, double d_max) {
  if (!std::isfinite(rate) || rate < 0.0) {
    throw ValidationError("r: rate must be a nonnegative real");
  }
  if (!(d_min > 0.0) || !std::isfinite(d_max)) {
    throw ValidationError("d_min: consumption bounds must be positive");
  }
  if (!(d_max >= d_min)) throw ValidationError("d_max: must be at least d_min");
  return rate * d_max / d_min;
}

}  // namespace flux
