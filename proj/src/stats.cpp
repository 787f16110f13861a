#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace lcf {

double ks_survival(double x) {
  if (!(x >= 0)) fail(ErrorCode::kInvalidArgument, "ks_survival: argument must be >= 0");
  if (x < 1e-3) return 1.0;  // the alternating series converges too slowly; Q ~ 1 here
  double sum = 0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) fail(ErrorCode::kInvalidArgument, "ks_test: empty sample");
  std::sort(samples.begin(), samples.end());
  const int n = static_cast<int>(samples.size());
  double d = 0;
  for (int i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    if (!(f >= 0.0 && f <= 1.0))
      fail(ErrorCode::kInvalidArgument, "ks_test: cdf value outside [0,1]");
    d = std::max(d, std::max((i + 1.0) / n - f, f - static_cast<double>(i) / n));
  }
  const double sn = std::sqrt(static_cast<double>(n));
  KsResult r;
  r.d = d;
  r.n = n;
  r.p_value = ks_survival((sn + 0.12 + 0.11 / sn) * d);
  return r;
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    fail(ErrorCode::kInvalidArgument, "pearson_correlation: size mismatch");
  const size_t n = a.size();
  if (n < 2) fail(ErrorCode::kInvalidArgument, "pearson_correlation: need at least two points");
  double ma = 0, mb = 0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0, sbb = 0, sab = 0;
  for (size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0 || sbb == 0)
    fail(ErrorCode::kInvalidArgument, "pearson_correlation: zero-variance input");
  return sab / std::sqrt(saa * sbb);
}

double weibull_cdf(double t, double m, double eta) {
  if (!(m >= 1)) fail(ErrorCode::kInvalidArgument, "weibull_cdf: shape must be >= 1");
  if (!(eta > 0)) fail(ErrorCode::kInvalidArgument, "weibull_cdf: scale must be positive");
  if (!(t > 0)) return 0.0;
  if (std::isinf(eta)) return 0.0;
  // (t/eta)^m via exp(m log(t/eta)); exp overflow to inf is benign here.
  const double h = std::exp(m * (std::log(t) - std::log(eta)));
  return -std::expm1(-h);
}

}  // namespace lcf
