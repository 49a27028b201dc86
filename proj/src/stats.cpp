#include "noisyq/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "noisyq/noise.hpp"

namespace noisyq {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

void CompensatedSum::merge(const CompensatedSum& other) noexcept {
  add(other.sum_);
  compensation_ += other.compensation_;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw InvalidArgument("wilson_interval: need at least one trial");
  if (successes > trials) throw InvalidArgument("wilson_interval: successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidArgument("wilson_interval: confidence must lie in (0, 1)");
  }
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 0.5 + confidence / 2.0);
  const auto n = static_cast<double>(trials);
  const double rate = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double scale = 1.0 + z2 / n;
  const double center = (rate + z2 / (2.0 * n)) / scale;
  const double half = z / scale * std::sqrt(rate * (1.0 - rate) / n + z2 / (4.0 * n * n));
  Interval iv{center - half, center + half};
  if (successes == 0) iv.low = 0.0;
  if (successes == trials) iv.high = 1.0;
  iv.low = std::clamp(iv.low, 0.0, rate);
  iv.high = std::clamp(iv.high, rate, 1.0);
  return iv;
}

double chi_square_uniform_pvalue(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw InvalidArgument("chi-square test needs at least two cells");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total <= 0.0) throw InvalidArgument("chi-square test needs observations");
  const double expected = total / static_cast<double>(counts.size());
  double statistic = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    statistic += d * d / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("loglog_slope: need two equally sized series with >= 2 points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double binomial_sigma(double rate, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

}  // namespace noisyq
