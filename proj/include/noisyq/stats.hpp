#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace noisyq {

/// Neumaier-compensated running sum. merge() is exact on the carried
/// compensation, so partial sums from different workers combine cleanly.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  void merge(const CompensatedSum& other) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);

/// Upper-tail p-value of Pearson's chi-square statistic against a uniform
/// expectation over `counts.size()` cells.
double chi_square_uniform_pvalue(std::span<const std::uint64_t> counts);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Median; averages the middle pair for even sizes.
double median(std::vector<double> values);

/// sqrt(rate (1 - rate) / trials)
double binomial_sigma(double rate, std::uint64_t trials);

}  // namespace noisyq
