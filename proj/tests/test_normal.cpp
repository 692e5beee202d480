#include <cmath>
#include <random>

#include "doctest.h"
#include "replistat/normal.hpp"

using namespace replistat;

// Reference values computed with 40-digit arithmetic (mpmath) and rounded
// to the nearest double.
TEST_CASE("standard normal tail values match high-precision references") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_sf(1.96) == doctest::Approx(0.024997895148220434).epsilon(1e-14));
  CHECK(2.0 * norm_sf(1.96) == doctest::Approx(0.049995790296440868).epsilon(1e-14));
  CHECK(2.0 * norm_sf(std::sqrt(2.0)) ==
        doctest::Approx(0.15729920705028513).epsilon(1e-14));
  // Far tail: the plain survival function must keep relative accuracy here.
  CHECK(norm_sf(11.96) == doctest::Approx(2.8780960513598006e-33).epsilon(1e-12));
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
}

TEST_CASE("cdf and sf are complementary and symmetric") {
  std::mt19937_64 eng(42);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    double x = u(eng);
    CHECK(norm_cdf(x) + norm_sf(x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm_cdf(-x) == doctest::Approx(norm_sf(x)).epsilon(1e-13));
  }
}

TEST_CASE("log survival function stays finite and accurate deep in the tail") {
  // Where the plain sf is representable, log_norm_sf must agree with its log.
  for (double x : {-5.0, -1.0, 0.0, 0.5, 3.0, 10.0, 25.0, 35.0}) {
    CHECK(log_norm_sf(x) == doctest::Approx(std::log(norm_sf(x))).epsilon(1e-12));
  }
  // Beyond underflow of sf itself, the log version must stay finite and
  // monotone decreasing.
  double prev = log_norm_sf(38.0);
  for (double x : {40.0, 60.0, 120.0, 300.0}) {
    double v = log_norm_sf(x);
    CHECK(std::isfinite(v));
    CHECK(v < prev);
    prev = v;
  }
  // Asymptotic sanity: log sf(x) ~ -x^2/2 - log(x) - log(2 pi)/2.
  double x = 300.0;
  double asym = -x * x / 2.0 - std::log(x) - 0.5 * std::log(2.0 * M_PI);
  CHECK(log_norm_sf(x) == doctest::Approx(asym).epsilon(1e-4));
  CHECK(log_norm_cdf(5.0) == doctest::Approx(std::log(norm_cdf(5.0))).epsilon(1e-12));
}

TEST_CASE("quantile inverts the distribution function") {
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(norm_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-14));
  CHECK(norm_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-14));
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));

  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    double x = u(eng);
    CHECK(norm_quantile(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
  }
  // Extreme probabilities stay finite and ordered.
  CHECK(norm_quantile(1e-300) < norm_quantile(1e-10));
  CHECK(std::isfinite(norm_quantile(1e-300)));
  CHECK_THROWS(norm_quantile(0.0));
  CHECK_THROWS(norm_quantile(1.0));
}

TEST_CASE("log-space helpers satisfy their identities") {
  CHECK(log1mexp(-1e-20) < 0.0);  // finite, not -inf from naive 1-exp
  CHECK(std::isfinite(log1mexp(-1e-20)));
  CHECK(log1mexp(-50.0) == doctest::Approx(std::log1p(-std::exp(-50.0))).epsilon(1e-14));
  // log1mexp(-log 2) = log(1/2)
  CHECK(log1mexp(-std::log(2.0)) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));

  std::mt19937_64 eng(99);
  std::uniform_real_distribution<double> u(-700.0, 0.0);
  for (int i = 0; i < 2000; ++i) {
    double la = u(eng), lb = u(eng);
    if (la < lb) std::swap(la, lb);
    double s = log_sum_exp(la, lb);
    CHECK(s >= la);
    CHECK(s == doctest::Approx(la + std::log1p(std::exp(lb - la))).epsilon(1e-13));
    double d = log_diff_exp(la, lb);
    if (la > lb) {
      CHECK(d <= la);
      // exp(d) + exp(lb) == exp(la), verified in the dominant scale.
      CHECK(log_sum_exp(d, lb) == doctest::Approx(la).epsilon(1e-12));
    }
  }
  double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(ninf, ninf) == ninf);
  CHECK(log_sum_exp(-1.0, ninf) == doctest::Approx(-1.0));
  CHECK(log_diff_exp(-1.0, ninf) == doctest::Approx(-1.0));
  CHECK(log_diff_exp(-2.5, -2.5) == ninf);
}
