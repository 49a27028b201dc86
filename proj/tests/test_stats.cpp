#include <cmath>
#include <vector>

#include "doctest.h"
#include "noisyq/noise.hpp"
#include "noisyq/stats.hpp"

using namespace noisyq;

TEST_CASE("Wilson interval at the boundaries") {
  const auto none = wilson_interval(0, 100);
  CHECK(none.low == 0.0);
  CHECK(none.high == doctest::Approx(0.036993498).epsilon(1e-7));
  CHECK(wilson_interval(100, 100).high == 1.0);
  const auto half = wilson_interval(50, 100);
  CHECK(half.low + half.high == doctest::Approx(1.0));
  CHECK_THROWS_AS(wilson_interval(1, 0), InvalidArgument);
  CHECK_THROWS_AS(wilson_interval(5, 4), InvalidArgument);
}

TEST_CASE("Wilson interval matches the closed form") {
  // z = 1.959963984540054 for 95%.
  const double z = 1.959963984540054;
  for (auto [k, n] : {std::pair{3, 40}, std::pair{17, 1000}, std::pair{999, 1000}}) {
    const double phat = double(k) / n;
    const double denom = 1 + z * z / n;
    const double centre = (phat + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4.0 * n * n)) / denom;
    const auto ci = wilson_interval(k, n);
    CHECK(ci.low == doctest::Approx(centre - half).epsilon(1e-12));
    CHECK(ci.high == doctest::Approx(centre + half).epsilon(1e-12));
    CHECK(ci.low <= phat);
    CHECK(ci.high >= phat);
  }
}

TEST_CASE("compensated sum recovers cancelled mass") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);

  CompensatedSum a, b, whole;
  for (int i = 0; i < 500; ++i) {
    a.add(0.1);
    b.add(0.3);
    whole.add(0.1);
  }
  for (int i = 0; i < 500; ++i) whole.add(0.3);
  a.merge(b);
  CHECK(a.value() == doctest::Approx(whole.value()).epsilon(1e-15));
}

TEST_CASE("chi-square p-value") {
  const std::vector<std::uint64_t> flat(10, 1000);
  CHECK(chi_square_uniform_pvalue(flat) == doctest::Approx(1.0));
  // statistic = 2 * 50^2 / 1000 = 5 on 1 degree of freedom
  const std::vector<std::uint64_t> skew{1050, 950};
  CHECK(chi_square_uniform_pvalue(skew) == doctest::Approx(0.025347318677468).epsilon(1e-9));
}

TEST_CASE("slopes, medians and sigma") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 3 * std::sqrt(2.0), 6, 6 * std::sqrt(2.0)};
  CHECK(loglog_slope(x, y) == doctest::Approx(0.5));
  CHECK(median({5, 1, 3}) == 3);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK(binomial_sigma(0.5, 100) == doctest::Approx(0.05));
}
