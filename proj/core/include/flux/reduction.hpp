#pragma once

#include "flux/common.hpp"
#include "flux/signal_model.hpp"

namespace flux {

/// Fraction of D a report must reach to count as truthful; alpha in (0, 1].
class AlphaLevel {
 public:
  explicit AlphaLevel(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Rate sufficient for alpha-truthfulness under an arbitrary signal model: the
/// Bernoulli truthful threshold at p = P(y >= alpha D). An upper bound, not the
/// minimal rate. Unbounded when p = 0; throws DegenerateProbabilityError when
/// p = 1.
Threshold alpha_threshold_single(int rounds, const SignalModel& model,
                                 AlphaLevel alpha);

/// Closed form of the above for Uniform[0, D]:
/// (1 - alpha^T) / ((1 - alpha)(1 - alpha^(T-1))), unbounded at alpha = 1.
Threshold uniform_alpha_threshold(int rounds, AlphaLevel alpha);

/// Scales a threshold derived for constant consumption so that it stays
/// sufficient when per-round consumption varies within [d_min, d_max].
double range_robust_scale(double rate, double d_min, double d_max);

}  // namespace flux
