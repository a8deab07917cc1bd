#include "flux/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flux/common.hpp"

namespace flux {
namespace {

constexpr double kMassTolerance = 1e-12;

void check_gross(double gross) {
  if (!std::isfinite(gross) || gross <= 0.0) {
    throw ValidationError("D: gross consumption must be a positive real");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

SignalModel SignalModel::bernoulli(double p, double gross) {
  check_gross(gross);
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("p: Bernoulli probability must lie strictly in (0, 1)");
  }
  return SignalModel(BernoulliSignal{p}, gross);
}

SignalModel SignalModel::uniform(double gross) {
  check_gross(gross);
  return SignalModel(UniformSignal{}, gross);
}

SignalModel SignalModel::empirical(std::vector<SupportPoint> points,
                                   double gross) {
  check_gross(gross);
  if (points.empty()) {
    throw ValidationError("points: empirical model needs at least one point");
  }
  double total = 0.0;
  for (const auto& pt : points) {
    if (!std::isfinite(pt.value) || pt.value < 0.0 || pt.value > gross) {
      throw ValidationError("points: value " + std::to_string(pt.value) +
                            " lies outside [0, D]");
    }
    if (!std::isfinite(pt.probability) || pt.probability < 0.0) {
      throw ValidationError("points: probabilities must be nonnegative");
    }
    total += pt.probability;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw ValidationError("points: probabilities sum to " +
                          std::to_string(total) + ", expected 1");
  }
  std::sort(points.begin(), points.end(),
            [](const SupportPoint& a, const SupportPoint& b) {
              return a.value < b.value;
            });
  std::vector<SupportPoint> merged;
  for (const auto& pt : points) {
    if (!merged.empty() && merged.back().value == pt.value) {
      merged.back().probability += pt.probability;
    } else {
      merged.push_back(pt);
    }
  }
  return SignalModel(EmpiricalSignal{std::move(merged)}, gross);
}

bool SignalModel::is_bernoulli() const {
  return std::holds_alternative<BernoulliSignal>(variant_);
}

bool SignalModel::has_finite_support() const {
  return !std::holds_alternative<UniformSignal>(variant_);
}

std::vector<SupportPoint> SignalModel::finite_support() const {
  return std::visit(
      Overloaded{
          [&](const BernoulliSignal& b) {
            return std::vector<SupportPoint>{{0.0, 1.0 - b.p}, {gross_, b.p}};
          },
          [](const UniformSignal&) -> std::vector<SupportPoint> {
            throw ValidationError(
                "model: uniform signal has continuous support; discretize it "
                "first");
          },
          [](const EmpiricalSignal& e) { return e.points; },
      },
      variant_);
}

std::string SignalModel::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const BernoulliSignal& b) {
                   out << "bernoulli(p=" << format_number(b.p) << ")";
                 },
                 [&](const UniformSignal&) { out << "uniform(0,D)"; },
                 [&](const EmpiricalSignal& e) {
                   out << "empirical(" << e.points.size() << " points)";
                 },
             },
             variant_);
  out << " D=" << format_number(gross_);
  return out.str();
}

SignalModel discretize_uniform(double gross, int levels) {
  if (levels < 2) throw ValidationError("levels: need at least 2 levels");
  std::vector<SupportPoint> pts;
  pts.reserve(static_cast<std::size_t>(levels));
  const double mass = 1.0 / levels;
  for (int i = 0; i < levels; ++i) {
    const double v = (i == levels - 1)
                         ? gross
                         : gross * static_cast<double>(i) / (levels - 1);
    pts.push_back({v, mass});
  }
  // Absorb the rounding residual so the masses sum to 1.
  double others = 0.0;
  for (int i = 0; i + 1 < levels; ++i) others += pts[i].probability;
  pts.back().probability = 1.0 - others;
  return SignalModel::empirical(std::move(pts), gross);
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed,
                                  std::uint64_t purpose, std::uint64_t index) {
  return RandomStream(mix64(mix64(mix64(master_seed) ^ purpose) ^ index));
}

double RandomStream::next_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Signal sample(const SignalModel& model, RandomStream& stream) {
  const double u = stream.next_unit();
  const double d = model.gross();
  return std::visit(
      Overloaded{
          [&](const BernoulliSignal& b) { return Signal{u < b.p ? d : 0.0}; },
          [&](const UniformSignal&) { return Signal{u * d}; },
          [&](const EmpiricalSignal& e) {
            double cumulative = 0.0;
            for (const auto& pt : e.points) {
              cumulative += pt.probability;
              if (u < cumulative) return Signal{pt.value};
            }
            // u fell into the rounding gap above the last cumulative mass.
            auto it = std::find_if(e.points.rbegin(), e.points.rend(),
                                   [](const SupportPoint& pt) {
                                     return pt.probability > 0.0;
                                   });
            return Signal{it->value};
          },
      },
      model.variant());
}

double busted_probability(const SignalModel& model, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha: must lie in [0, 1]");
  }
  if (alpha == 0.0) return 1.0;
  const double d = model.gross();
  return std::visit(
      Overloaded{
          [&](const BernoulliSignal& b) { return b.p; },
          [&](const UniformSignal&) { return 1.0 - alpha; },
          [&](const EmpiricalSignal& e) {
            const double cut = alpha * d - 1e-12 * d;
            double mass = 0.0;
            for (const auto& pt : e.points) {
              if (pt.value >= cut) mass += pt.probability;
            }
            return std::min(mass, 1.0);
          },
      },
      model.variant());
}

}  // namespace flux
