#include "noisyq/walk.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "noisyq/kernels.hpp"

namespace noisyq {
namespace {

constexpr double kSnapTolerance = 1e-9;

void check_error_probability(double delta, const char* what) {
  if (!std::isfinite(delta) || !(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie strictly inside (0, 1), got " +
                          std::to_string(delta));
  }
}

void check_non_negative(std::int64_t x) {
  if (x < 0) throw InvalidArgument("walk target must be non-negative");
}

constexpr std::size_t kChunk = std::size_t{1} << 16;

template <class Fn>
void for_each_chunk(const kernels::WalkParams& params, std::uint64_t walks, std::uint64_t seed,
                    Fn&& fn) {
  std::vector<kernels::WalkRecord> records(static_cast<std::size_t>(std::min<std::uint64_t>(walks, kChunk)));
  for (std::uint64_t first = 0; first < walks; first += kChunk) {
    const auto count = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, walks - first));
    std::span<kernels::WalkRecord> chunk(records.data(), count);
    kernels::simulate_walks(params, seed, first, chunk);
    for (const auto& r : chunk) fn(r);
  }
}

}  // namespace

std::int64_t stopping_threshold(const NoiseModel& noise, double log_inverse_error) {
  if (!std::isfinite(log_inverse_error) || !(log_inverse_error > 0.0)) {
    throw InvalidArgument("stopping_threshold: log(1/delta) must be positive and finite");
  }
  double ratio = log_inverse_error / noise.log_ratio();
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= kSnapTolerance * std::max(1.0, std::abs(ratio))) ratio = nearest;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(ratio)));
}

WalkPolicy WalkPolicy::from_log_inverse(const NoiseModel& noise, double log_inv_delta0,
                                        double log_inv_delta1) {
  return WalkPolicy{stopping_threshold(noise, log_inv_delta1), stopping_threshold(noise, log_inv_delta0)};
}

WalkPolicy WalkPolicy::from_errors(const NoiseModel& noise, double delta0, double delta1) {
  check_error_probability(delta0, "delta0");
  check_error_probability(delta1, "delta1");
  return from_log_inverse(noise, -std::log(delta0), -std::log(delta1));
}

double hitting_probability(double p, std::int64_t x) {
  const NoiseModel noise(p);
  check_non_negative(x);
  return std::pow(noise.odds(), static_cast<double>(x));
}

double expected_hitting_time(double p, std::int64_t x) {
  const NoiseModel noise(p);
  check_non_negative(x);
  return static_cast<double>(x) / (1.0 - 2.0 * noise.p());
}

WalkOutcome asymmetric_check_bit(BitSource& oracle, std::size_t i, double delta0, double delta1) {
  return check_bit(oracle, i, WalkPolicy::from_errors(oracle.noise(), delta0, delta1));
}

WalkOutcome check_bit(BitSource& oracle, std::size_t i, double delta) {
  return asymmetric_check_bit(oracle, i, delta, delta);
}

WalkOutcome check_bit(BitSource& oracle, std::size_t i, const WalkPolicy& policy) {
  if (i >= oracle.size()) throw InvalidArgument("check_bit: index out of range");
  return run_walk(policy, [&] { return oracle.query(i); });
}

WalkOutcome check_edge(EdgeSource& oracle, int u, int v, const WalkPolicy& policy) {
  return run_walk(policy, [&] { return oracle.query(u, v); });
}

HittingTally simulate_hitting(double p, std::int64_t x, std::uint64_t walks, std::uint64_t seed,
                              double truncation_bias) {
  const NoiseModel noise(p);
  check_non_negative(x);
  if (!(truncation_bias > 0.0 && truncation_bias < 1.0)) {
    throw InvalidArgument("simulate_hitting: truncation bias must lie in (0, 1)");
  }
  HittingTally tally{walks, 0, 0};
  if (x == 0) {
    tally.hits = walks;
    return tally;
  }
  // odds^(x + floor) <= bias
  const auto span = static_cast<std::int64_t>(std::ceil(-std::log(truncation_bias) / noise.log_ratio()));
  tally.floor_level = std::max<std::int64_t>(1, span - x);

  kernels::WalkParams params;
  params.up_threshold = bernoulli_threshold(p);
  params.upper = x;
  params.lower = tally.floor_level;
  for_each_chunk(params, walks, seed, [&](const kernels::WalkRecord& r) {
    if (r.outcome == kernels::WalkOutcomeKind::hit_upper) ++tally.hits;
  });
  return tally;
}

double PassageTally::mean() const noexcept {
  return walks == 0 ? 0.0 : static_cast<double>(total_steps) / static_cast<double>(walks);
}

double PassageTally::stddev() const noexcept {
  if (walks < 2) return 0.0;
  const auto n = static_cast<long double>(walks);
  const auto s = static_cast<long double>(total_steps);
  const auto ss = static_cast<long double>(total_sq_steps);
  const long double var = (ss - s * s / n) / (n - 1);
  return var > 0 ? static_cast<double>(std::sqrt(var)) : 0.0;
}

PassageTally simulate_first_passage(double p, std::int64_t x, std::uint64_t walks,
                                    std::uint64_t seed) {
  const NoiseModel noise(p);
  if (x < 1) throw InvalidArgument("simulate_first_passage: target depth must be >= 1");
  kernels::WalkParams params;
  params.up_threshold = bernoulli_threshold(p);
  params.lower = x;
  PassageTally tally;
  tally.walks = walks;
  for_each_chunk(params, walks, seed, [&](const kernels::WalkRecord& r) {
    tally.total_steps += r.steps;
    tally.total_sq_steps += static_cast<unsigned __int128>(r.steps) * r.steps;
  });
  return tally;
}

}  // namespace noisyq
