#include "flux/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string_view>

namespace flux {

Threshold Threshold::finite(double rate) {
  if (!std::isfinite(rate) || rate < 0.0) {
    throw ValidationError("rate: finite threshold must be a nonnegative real");
  }
  Threshold t;
  t.finite_ = true;
  t.rate_ = rate;
  return t;
}

double Threshold::value() const {
  if (!finite_) throw std::logic_error("threshold has no finite value");
  return rate_;
}

std::string to_string(const Threshold& t) {
  return t.is_finite() ? format_number(t.value()) : std::string("inf");
}

std::uint64_t state_cap_from_env() {
  const char* raw = std::getenv("FLUX_STATE_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultStateCap;
  char* end = nullptr;
  const unsigned long long cap = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || cap == 0) {
    throw ValidationError("FLUX_STATE_CAP: expected a positive integer, got '" +
                          std::string(raw) + "'");
  }
  return cap;
}

double bisect_monotone(const std::function<bool(double)>& predicate, double lo,
                       double hi, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tol: must be positive");
  if (!(lo < hi)) throw ValidationError("lo/hi: expected lo < hi");
  if (predicate(lo)) {
    throw ValidationError("lo: predicate already holds at the lower bracket");
  }
  if (!predicate(hi)) {
    throw ValidationError("hi: predicate does not hold at the upper bracket");
  }
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (predicate(mid) ? hi : lo) = mid;
  }
  return hi;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0.00000000";
  constexpr int kSignificant = 9;
  // Round first so that e.g. 9.999999999 moves to the next decade.
  char probe[64];
  std::snprintf(probe, sizeof probe, "%.*e", kSignificant - 1, value);
  const int exponent = std::atoi(std::string_view(probe).substr(
                                     std::string_view(probe).find('e') + 1)
                                     .data());
  const int decimals = std::max(0, kSignificant - 1 - exponent);
  char out[400];
  std::snprintf(out, sizeof out, "%.*f", decimals, value);
  return out;
}

}  // namespace flux
