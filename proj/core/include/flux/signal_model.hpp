#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace flux {

/// Partial signal observed by the center in one round; always in [0, D].
struct Signal {
  double value = 0.0;
};

struct SupportPoint {
  double value = 0.0;
  double probability = 0.0;
};

struct BernoulliSignal {
  double p = 0.5;  ///< probability the signal reveals the full consumption D
};

struct UniformSignal {};  ///< continuous uniform on [0, D]

struct EmpiricalSignal {
  std::vector<SupportPoint> points;  ///< sorted by value, merged duplicates
};

/// Distribution F of the partial signal on [0, D]. Immutable once built; the
/// factories reject anything that violates the model invariants.
class SignalModel {
 public:
  using Variant = std::variant<BernoulliSignal, UniformSignal, EmpiricalSignal>;

  static SignalModel bernoulli(double p, double gross);
  static SignalModel uniform(double gross);
  /// Probabilities must be nonnegative and sum to 1 within 1e-12; every point
  /// must lie in [0, gross].
  static SignalModel empirical(std::vector<SupportPoint> points, double gross);

  double gross() const { return gross_; }
  const Variant& variant() const { return variant_; }
  bool is_bernoulli() const;
  bool has_finite_support() const;

  /// Support points with their masses; throws ValidationError for the
  /// continuous uniform model.
  std::vector<SupportPoint> finite_support() const;

  std::string describe() const;

 private:
  SignalModel(Variant v, double gross) : variant_(std::move(v)), gross_(gross) {}
  Variant variant_;
  double gross_;
};

/// Equal-mass discretization of Uniform[0, gross] onto `levels` evenly spaced
/// points that include both endpoints.
SignalModel discretize_uniform(double gross, int levels);

/// Deterministic per-consumer random stream. Streams are derived from a master
/// seed plus a (purpose, index) tag, so trial i sees the same draws no matter
/// which thread runs it.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  static RandomStream derive(std::uint64_t master_seed, std::uint64_t purpose,
                             std::uint64_t index);

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double next_unit();

 private:
  std::mt19937_64 engine_;
};

/// Stream purposes used across the code base.
namespace stream_purpose {
inline constexpr std::uint64_t kTrace = 1;
inline constexpr std::uint64_t kMonteCarlo = 2;
inline constexpr std::uint64_t kTest = 99;
}  // namespace stream_purpose

/// splitmix64 finalizer; used to mix seeds and tags.
std::uint64_t mix64(std::uint64_t x);

Signal sample(const SignalModel& model, RandomStream& stream);

/// P(y >= alpha * D), inclusive at the boundary. Throws ValidationError for
/// alpha outside [0, 1].
double busted_probability(const SignalModel& model, double alpha);

}  // namespace flux
