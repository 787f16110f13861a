#pragma once

#include <functional>
#include <vector>

namespace lcf {

struct KsResult {
  double d = 0;        // Kolmogorov-Smirnov statistic sup |F_n - F|
  double p_value = 1;  // asymptotic p-value with finite-n correction
  int n = 0;
};

// Survival function of the Kolmogorov distribution,
//   Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2),
// summed to machine precision.
double ks_survival(double x);

// One-sample two-sided K-S test of `samples` against the continuous CDF
// `cdf`.  The p-value uses the standard finite-n corrected argument
// (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D.  Errors on an empty sample.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// Sample Pearson correlation coefficient.  Errors on size mismatch,
// fewer than two points, or a zero-variance input.
double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

// Weibull(shape m, scale eta) CDF, 1 - exp(-(t/eta)^m), evaluated in log
// space so extreme shapes do not overflow.  t <= 0 gives 0; eta = inf
// gives 0 for every finite t.
double weibull_cdf(double t, double m, double eta);

}  // namespace lcf
