#include "rng.hpp"

#include <cmath>

#include "errors.hpp"

namespace lcf {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;  // 2^64 / golden ratio
constexpr uint64_t kLeaf = 0xD1B54A32D192ED03ULL;    // arbitrary odd constant

// SplitMix64 output finalizer (Steele/Lea/Vigna).
uint64_t mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream_id)
    : state_(mix(mix(seed + kGolden) ^ mix(stream_id + kLeaf))) {}

uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double Rng::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::exponential() { return -std::log(uniform()); }

int64_t Rng::poisson(double lambda) {
  if (!(lambda >= 0) || !std::isfinite(lambda))
    fail(ErrorCode::kInvalidArgument, "poisson: rate must be finite and nonnegative");
  if (lambda == 0) return 0;

  if (lambda < 30.0) {
    // Product of uniforms: count factors until the product drops below
    // exp(-lambda).  Exact and stable for small rates.
    const double limit = std::exp(-lambda);
    int64_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

  // PTRS transformed rejection (Hormann 1993), exact for lambda >= ~10.
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_lambda = std::log(lambda);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_lambda - lambda - std::lgamma(k + 1.0))
      return static_cast<int64_t>(kf);
  }
}

uint64_t split_seed(uint64_t seed, uint64_t index) { return Rng(seed, index).next_u64(); }

}  // namespace lcf
