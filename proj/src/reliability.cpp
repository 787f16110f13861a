#include "reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "rng.hpp"

namespace lcf {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_field(const SurfaceField& sf, double m) {
  if (!(m >= 1)) fail(ErrorCode::kInvalidArgument, "reliability: shape m must be >= 1");
  if (sf.points.size() != sf.n_det.size())
    fail(ErrorCode::kInvalidArgument, "reliability: surface field size mismatch");
  for (double n : sf.n_det)
    if (!(n > 0)) fail(ErrorCode::kInvalidArgument, "reliability: N_det values must be positive");
}

// log sum_q weight_q (1/N_q)^m over samples with finite life; -inf if none.
double log_hazard_sum(const SurfaceField& sf, double m) {
  double peak = kNegInf;
  std::vector<double> lt;
  lt.reserve(sf.n_det.size());
  for (size_t q = 0; q < sf.n_det.size(); ++q) {
    if (std::isinf(sf.n_det[q])) continue;  // 1/inf = 0 contributes nothing
    const double v = std::log(sf.points[q].weight) - m * std::log(sf.n_det[q]);
    lt.push_back(v);
    peak = std::max(peak, v);
  }
  if (lt.empty()) return kNegInf;
  double s = 0;
  for (double v : lt) s += std::exp(v - peak);
  return peak + std::log(s);
}

}  // namespace

double lm_norm(const SurfaceField& sf, double m) {
  validate_field(sf, m);
  const double ls = log_hazard_sum(sf, m);
  return std::isinf(ls) ? 0.0 : std::exp(ls / m);
}

double hazard(const SurfaceField& sf, double m, double t) {
  validate_field(sf, m);
  if (!(t >= 0)) fail(ErrorCode::kInvalidArgument, "hazard: time must be >= 0");
  if (t == 0) return 0.0;
  const double ls = log_hazard_sum(sf, m);
  if (ls == kNegInf) return 0.0;
  return std::exp(m * std::log(t) + ls);
}

double pof(const SurfaceField& sf, double m, double t_star) {
  return -std::expm1(-hazard(sf, m, t_star));
}

double weibull_scale(const SurfaceField& sf, double m) {
  const double norm = lm_norm(sf, m);
  return norm == 0.0 ? kInfiniteLife : 1.0 / norm;
}

double deterministic_life(const SurfaceField& sf) {
  if (sf.n_det.empty()) fail(ErrorCode::kInvalidArgument, "deterministic_life: empty field");
  double t = kInfiniteLife;
  for (double n : sf.n_det) t = std::min(t, n);
  return t;
}

ReliabilityReport assess_reliability(const SurfaceField& sf, double m, double t_star) {
  if (!(t_star >= 0)) fail(ErrorCode::kInvalidArgument, "assess: t_star must be >= 0");
  ReliabilityReport r;
  r.m = m;
  r.t_star = t_star;
  r.h = hazard(sf, m, t_star);
  r.eta = weibull_scale(sf, m);
  r.pof = -std::expm1(-r.h);
  r.survival = std::exp(-r.h);
  r.t_det = deterministic_life(sf);
  return r;
}

CrackHistory sample_history(const SurfaceField& sf, double m, double t_max, uint64_t seed) {
  validate_field(sf, m);
  if (!(t_max > 0)) fail(ErrorCode::kInvalidArgument, "sample_history: t_max must be positive");
  const double h_total = hazard(sf, m, t_max);
  if (!std::isfinite(h_total))
    fail(ErrorCode::kInvalidArgument, "sample_history: hazard at t_max is not finite");

  CrackHistory hist;
  hist.t_max = t_max;
  hist.seed = seed;
  if (h_total == 0) return hist;

  // Categorical face law: prob_q ∝ weight_q (1/N_q)^m, normalized in
  // log space, then turned into a cumulative table ending exactly at 1.
  std::vector<int> face_of;  // categorical index -> quadrature index
  std::vector<double> cum;
  {
    const double ls = log_hazard_sum(sf, m);
    double acc = 0;
    for (size_t q = 0; q < sf.n_det.size(); ++q) {
      if (std::isinf(sf.n_det[q])) continue;
      acc += std::exp(std::log(sf.points[q].weight) - m * std::log(sf.n_det[q]) - ls);
      face_of.push_back(static_cast<int>(q));
      cum.push_back(acc);
    }
    cum.back() = 1.0;
  }

  Rng rng(seed, 0);
  const int64_t n = rng.poisson(h_total);
  hist.events.resize(static_cast<size_t>(n));
  std::vector<int> quad_idx(hist.events.size());  // quadrature point per event

  // Documented draw order: all times, then all faces, then all positions.
  for (auto& ev : hist.events) ev.t = t_max * std::pow(rng.uniform(), 1.0 / m);
  for (size_t e = 0; e < hist.events.size(); ++e) {
    const double u = rng.uniform();  // in (0, 1], so lower_bound never overruns
    const size_t c = static_cast<size_t>(std::lower_bound(cum.begin(), cum.end(), u) -
                                         cum.begin());
    quad_idx[e] = face_of[std::min(c, cum.size() - 1)];
    hist.events[e].face = sf.points[quad_idx[e]].face;
  }
  for (size_t e = 0; e < hist.events.size(); ++e) {
    // Uniform position within the square face: two offsets along the
    // in-plane axes (face normals are axis-aligned).
    const SurfacePoint& sp = sf.points[quad_idx[e]];
    const double side = std::sqrt(sp.weight);
    int na = 0;
    for (int i = 1; i < 3; ++i)
      if (std::fabs(sp.normal[i]) > std::fabs(sp.normal[na])) na = i;
    const int e1 = (na + 1) % 3, e2 = (na + 2) % 3;
    const double o1 = side * (rng.uniform() - 0.5);
    const double o2 = side * (rng.uniform() - 0.5);
    hist.events[e].x = sp.x;
    hist.events[e].x[e1] += o1;
    hist.events[e].x[e2] += o2;
  }

  std::sort(hist.events.begin(), hist.events.end(),
            [](const CrackEvent& a, const CrackEvent& b) { return a.t < b.t; });
  return hist;
}

double first_failure(const CrackHistory& h) {
  if (h.events.empty()) return kInfiniteLife;
  double t = h.events.front().t;
  for (const auto& ev : h.events) t = std::min(t, ev.t);
  return t;
}

}  // namespace lcf
