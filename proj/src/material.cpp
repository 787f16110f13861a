#include "material.hpp"

#include <cmath>

#include "errors.hpp"

namespace lcf {

namespace {

// Newton iteration limited to a guaranteed bracket [lo, hi]; falls back to
// bisection whenever the Newton step leaves the bracket or stalls. `f` must
// be strictly monotone increasing on the bracket with f(lo) <= 0 <= f(hi).
template <typename F, typename DF>
double safeguarded_newton(F f, DF df, double lo, double hi, double x0, double rel_tol) {
  double x = x0;
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx > 0)
      hi = x;
    else
      lo = x;
    const double dfx = df(x);
    double next = (dfx > 0) ? x - fx / dfx : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double dx = std::fabs(next - x);
    x = next;
    if (dx <= rel_tol * std::max(1.0, std::fabs(x)) && hi - lo <= rel_tol * std::max(1.0, hi))
      break;
  }
  return x;
}

}  // namespace

void MaterialParams::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidArgument, "material: " + what); };
  if (!(mu > 0)) bad("mu must be > 0");
  if (!(lambda + mu > 0)) bad("lambda + mu must be > 0");
  if (!(K > 0)) bad("K must be > 0");
  if (!(n_prime > 0 && n_prime < 1)) bad("n_prime must lie in (0, 1)");
  if (!(sigma_f > 0)) bad("sigma_f must be > 0");
  if (!(eps_f > 0)) bad("eps_f must be > 0");
  if (!(b < 0)) bad("b must be < 0");
  if (!(c < 0)) bad("c must be < 0");
  if (!(m >= 1)) bad("m must be >= 1");
  if (!(amplitude_factor > 0)) bad("amplitude_factor must be > 0");
}

double youngs_modulus(const MaterialParams& p) {
  return p.mu * (3.0 * p.lambda + 2.0 * p.mu) / (p.lambda + p.mu);
}

double von_mises(const Mat3& stress) {
  const Mat3 dev = deviator(sym(stress));
  const double j2 = frobenius_inner(dev, dev);  // tr(dev^2) for symmetric dev
  return std::sqrt(1.5 * j2);
}

double ramberg_osgood(double stress_amplitude, const MaterialParams& p) {
  if (stress_amplitude < 0) fail(ErrorCode::kInvalidArgument, "ramberg_osgood: negative stress");
  const double e = youngs_modulus(p);
  return stress_amplitude / e + std::pow(stress_amplitude / p.K, 1.0 / p.n_prime);
}

double neuber_shakedown(double sigma_v, const MaterialParams& p) {
  if (sigma_v < 0) fail(ErrorCode::kInvalidArgument, "neuber_shakedown: negative stress");
  if (sigma_v == 0) return 0.0;
  const double e = youngs_modulus(p);
  const double q = 1.0 / p.n_prime;
  const double target = sigma_v * sigma_v / e;
  // R is strictly increasing with R(0) = -target < 0 and R(sigma_v) > 0, so
  // the positive root is bracketed by [0, sigma_v].
  auto r = [&](double s) { return s * s / e + s * std::pow(s / p.K, q) - target; };
  auto dr = [&](double s) { return 2.0 * s / e + (q + 1.0) * std::pow(s / p.K, q); };
  return safeguarded_newton(r, dr, 0.0, sigma_v, sigma_v, 1e-15);
}

double cmb_strain(double n_cycles, const MaterialParams& p) {
  if (!(n_cycles > 0)) fail(ErrorCode::kInvalidArgument, "cmb_strain: life must be > 0");
  if (std::isinf(n_cycles)) return 0.0;
  const double e = youngs_modulus(p);
  const double rev = 2.0 * n_cycles;  // reversals
  return (p.sigma_f / e) * std::pow(rev, p.b) + p.eps_f * std::pow(rev, p.c);
}

double cmb_inverse(double eps_a, const MaterialParams& p) {
  if (!(eps_a >= 0)) fail(ErrorCode::kInvalidArgument, "cmb_inverse: negative strain");
  if (eps_a == 0) return kInfiniteLife;
  const double e = youngs_modulus(p);
  // Work in y = log(2n); both terms become pure exponentials, so iterates
  // stay well scaled across the whole representable life range.
  auto g = [&](double y) {
    return (p.sigma_f / e) * std::exp(p.b * y) + p.eps_f * std::exp(p.c * y) - eps_a;
  };
  auto dg = [&](double y) {
    return p.b * (p.sigma_f / e) * std::exp(p.b * y) + p.c * p.eps_f * std::exp(p.c * y);
  };
  double ylo = std::log(2e-6), yhi = std::log(2e18);
  // Grow the bracket adaptively; the curve spans [0, inf) so one end always
  // captures eps_a unless the life overflows the double range.
  const double y_cap = 700.0;  // e^700 ~ 1e304, past any representable life
  while (g(ylo) < 0) {
    ylo -= 50.0;
    if (ylo < -y_cap) fail(ErrorCode::kInvalidArgument, "cmb_inverse: strain demand too large");
  }
  while (g(yhi) > 0) {
    yhi += 50.0;
    if (yhi > y_cap) return kInfiniteLife;
  }
  // Monotone decreasing in y: flip sign so the helper sees an increasing f.
  auto f = [&](double y) { return -g(y); };
  auto df = [&](double y) { return -dg(y); };
  const double y = safeguarded_newton(f, df, ylo, yhi, 0.5 * (ylo + yhi), 1e-15);
  return 0.5 * std::exp(y);
}

double phi(double sigma_v, const MaterialParams& p) {
  if (sigma_v < 0) fail(ErrorCode::kInvalidArgument, "phi: negative stress");
  if (sigma_v == 0) return kInfiniteLife;
  return cmb_inverse(ramberg_osgood(neuber_shakedown(sigma_v, p), p), p);
}

Mat3 stress_from_gradient(const Mat3& grad_u, const MaterialParams& p) {
  Mat3 s = scale(add(grad_u, transpose(grad_u)), p.mu);
  const double lt = p.lambda * trace(grad_u);
  s[0] += lt;
  s[4] += lt;
  s[8] += lt;
  return s;
}

double n_det(const Mat3& grad_u, const MaterialParams& p) {
  const double sv = von_mises(stress_from_gradient(grad_u, p));
  return phi(p.amplitude_factor * sv, p);
}

std::vector<EnPoint> en_curve(const MaterialParams& p, int n_points, double n_lo, double n_hi) {
  if (n_points < 2) fail(ErrorCode::kInvalidArgument, "en_curve: need at least 2 points");
  if (!(n_lo > 0 && n_hi > n_lo)) fail(ErrorCode::kInvalidArgument, "en_curve: bad life range");
  std::vector<EnPoint> pts(n_points);
  const double lo = std::log(n_lo), hi = std::log(n_hi);
  for (int i = 0; i < n_points; ++i) {
    const double n = std::exp(lo + (hi - lo) * i / (n_points - 1));
    pts[i] = {n, cmb_strain(n, p)};
  }
  return pts;
}

}  // namespace lcf
