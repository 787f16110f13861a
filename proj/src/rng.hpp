#pragma once

#include <cstdint>

namespace lcf {

// Deterministic splittable pseudo-random generator (SplitMix64).
//
// Seeding scheme (documented so runs are reproducible across platforms):
// the initial state of stream `stream_id` under master seed `seed` is
//   state0 = mix(mix(seed + GOLDEN) ^ mix(stream_id + LEAF))
// where mix() is the SplitMix64 output finalizer and GOLDEN/LEAF are the
// fixed 64-bit constants in rng.cpp.  Distinct (seed, stream_id) pairs land
// at pseudo-random positions of the 2^64-long orbit, so streams are
// non-overlapping for any realistic draw budget.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream_id = 0);

  // Next raw 64-bit word.
  uint64_t next_u64();

  // Uniform on the half-open interval (0, 1]: ((next >> 11) + 1) * 2^-53.
  // Never returns 0, so log(uniform()) is always finite.
  double uniform();

  // Standard exponential (rate 1) via inversion.
  double exponential();

  // Poisson(lambda) exactly distributed for any lambda >= 0.  Small rates
  // use the product-of-uniforms method; large rates use Hormann's PTRS
  // transformed rejection.  Draw count varies, which is fine: determinism
  // only requires a fixed consumption order per (seed, stream).
  int64_t poisson(double lambda);

 private:
  uint64_t state_;
};

// Documented sub-seed derivation for families of independent streams
// (e.g. one crack history per index): sub_seed(s, i) is the first output
// of stream (s, i).  Feeding the result to Rng(sub_seed, 0) gives
// reproducible per-index generators.
uint64_t split_seed(uint64_t seed, uint64_t index);

}  // namespace lcf
