#pragma once

#include <cstdint>
#include <vector>

#include "elasticity.hpp"
#include "material.hpp"

namespace lcf {

// Weibull summary of one surface field at a warranty time t_star.
struct ReliabilityReport {
  double h = 0;                  // cumulative hazard H(t_star)
  double eta = kInfiniteLife;    // Weibull scale (cycles)
  double pof = 0;                // failure probability at t_star
  double survival = 1;           // 1 - pof
  double t_det = kInfiniteLife;  // deterministic life, min surface life
  double m = 1;                  // Weibull shape used
  double t_star = 0;             // warranty horizon (cycles)
};

// One crack initiation: time (cycles), surface location, owning face.
struct CrackEvent {
  double t = 0;
  Vec3 x{0, 0, 0};
  int face = -1;
};

// A sampled realization of the crack initiation process up to t_max.
// Events are sorted by time; all times lie in (0, t_max].
struct CrackHistory {
  std::vector<CrackEvent> events;
  double t_max = 0;
  uint64_t seed = 0;
};

// L^m norm of 1/N_det over the surface quadrature, with 1/inf = 0.
// Evaluated via log-sum-exp so shapes like m = 200 neither overflow nor
// flush to zero.  Returns 0 when every sample has infinite life.
double lm_norm(const SurfaceField& sf, double m);

// Cumulative hazard H(t) = t^m * lm_norm^m, computed as
// exp(m log t + log sum) to survive extreme shapes.
double hazard(const SurfaceField& sf, double m, double t);

// Failure probability F_T(t_star) = 1 - exp(-H(t_star)).
double pof(const SurfaceField& sf, double m, double t_star);

// Weibull scale eta = 1/lm_norm (inf when the norm is 0).
double weibull_scale(const SurfaceField& sf, double m);

// Deterministic life: minimum N_det over quadrature points.
double deterministic_life(const SurfaceField& sf);

// Full report at t_star; pof = 1 - exp(-(t_star/eta)^m) holds to rounding.
ReliabilityReport assess_reliability(const SurfaceField& sf, double m, double t_star);

// Samples one realization of the Poisson crack process on (0, t_max].
// Deterministic given the seed (generator stream (seed, 0)); the draw
// order is fixed and documented: (1) the event count ~ Poisson(H(t_max)),
// (2) all event times t = t_max * U^(1/m), (3) all face indices from the
// categorical law prob ∝ weight * (1/N_det)^m, (4) all in-face positions,
// two uniform offsets each.  Events are then sorted by time.
CrackHistory sample_history(const SurfaceField& sf, double m, double t_max, uint64_t seed);

// Earliest event time, or the infinite-life sentinel for an empty history.
double first_failure(const CrackHistory& h);

}  // namespace lcf
