#include "stats.hpp"

#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

using namespace lcf;

TEST_CASE("Kolmogorov survival function matches frozen high-precision values") {
  // Oracle: 400-term alternating series evaluated in 30-digit arithmetic.
  CHECK(ks_survival(0.5) == doctest::Approx(0.96394524366487509).epsilon(1e-13));
  CHECK(ks_survival(0.8) == doctest::Approx(0.54414241157419808).epsilon(1e-13));
  CHECK(ks_survival(1.0) == doctest::Approx(0.26999967167735452).epsilon(1e-13));
  CHECK(ks_survival(1.36) == doctest::Approx(0.049485876755377884).epsilon(1e-13));
  CHECK(ks_survival(2.0) == doctest::Approx(0.00067092525577969535).epsilon(1e-13));
  CHECK(ks_survival(0.0) == 1.0);
  CHECK(ks_survival(8.0) < 1e-50);  // exp(-128) scale, effectively zero
  CHECK_THROWS_AS(ks_survival(-0.1), Error);
}

TEST_CASE("K-S statistic and p-value on a tiny hand case") {
  // {0.1, 0.5, 0.9} against U(0,1): D = max_i max((i+1)/3 - x_i, x_i - i/3).
  const KsResult r = ks_test({0.9, 0.1, 0.5}, [](double x) { return x; });
  CHECK(r.n == 3);
  CHECK(r.d == doctest::Approx(0.2333333333333334).epsilon(1e-14));
  CHECK(r.p_value == doctest::Approx(0.98833523041228243).epsilon(1e-12));
}

TEST_CASE("K-S accepts the true law and rejects a wrong one") {
  Rng rng(2024, 0);
  std::vector<double> u(2000);
  for (double& v : u) v = rng.uniform();

  const KsResult good = ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(good.p_value > 0.01);

  // x^2 is the CDF of sqrt(U), not of U: decisively rejected.
  const KsResult bad = ks_test(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); });
  CHECK(bad.p_value < 1e-6);
  CHECK(bad.d > good.d);
}

TEST_CASE("K-S input validation") {
  CHECK_THROWS_AS(ks_test({}, [](double) { return 0.5; }), Error);
  CHECK_THROWS_AS(ks_test({0.5}, [](double) { return 1.5; }), Error);
}

TEST_CASE("Pearson correlation closed cases") {
  CHECK(pearson_correlation({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pearson_correlation({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0).epsilon(1e-14));
  // Hand case: a = {0,1,2}, b = {0,0,3}; r = 3/(sqrt(2)*sqrt(6)) = sqrt(3)/2.
  CHECK(pearson_correlation({0, 1, 2}, {0, 0, 3}) ==
        doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));

  Rng rng(77, 0);
  std::vector<double> a(20000), b(20000);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.uniform();
    b[i] = rng.uniform();
  }
  CHECK(std::fabs(pearson_correlation(a, b)) < 0.03);  // ~4/sqrt(n)

  CHECK_THROWS_AS(pearson_correlation({1, 2}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(pearson_correlation({1}, {1}), Error);
  CHECK_THROWS_AS(pearson_correlation({2, 2, 2}, {1, 2, 3}), Error);
}

TEST_CASE("Weibull CDF closed values and extreme shape") {
  CHECK(weibull_cdf(0.0, 2.0, 5.0) == 0.0);
  CHECK(weibull_cdf(-1.0, 2.0, 5.0) == 0.0);
  CHECK(weibull_cdf(5.0, 2.0, 5.0) == doctest::Approx(-std::expm1(-1.0)).epsilon(1e-15));
  // m = 1 is the exponential law.
  CHECK(weibull_cdf(3.0, 1.0, 2.0) == doctest::Approx(-std::expm1(-1.5)).epsilon(1e-15));
  // Extreme shape: steps from ~0 to ~1 across t = eta without overflow.
  CHECK(weibull_cdf(0.99 * 7.0, 200.0, 7.0) < 0.2);
  CHECK(weibull_cdf(1.01 * 7.0, 200.0, 7.0) > 0.8);
  CHECK(weibull_cdf(100.0, 200.0, 7.0) == 1.0);
  CHECK(weibull_cdf(1.0, 2.0, std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(weibull_cdf(1.0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(weibull_cdf(1.0, 2.0, 0.0), Error);
}

TEST_CASE("K-S against Weibull on inverse-sampled data") {
  // Inverse-CDF sampling is an independent construction of the law.
  const double m = 2.5, eta = 4000;
  Rng rng(555, 0);
  std::vector<double> t(5000);
  for (double& v : t) v = eta * std::pow(-std::log(rng.uniform()), 1.0 / m);
  const KsResult r = ks_test(t, [&](double x) { return weibull_cdf(x, m, eta); });
  CHECK(r.p_value > 0.01);
}
