#include "noisyq/counting.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "noisyq/walk.hpp"

namespace noisyq {
namespace {

void check_delta(double delta) {
  if (!std::isfinite(delta) || !(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgument("delta must lie strictly inside (0, 1), got " + std::to_string(delta));
  }
}

}  // namespace

CountResult threshold_count(BitSource& oracle, std::size_t k, double delta) {
  const std::size_t n = oracle.size();
  if (k < 1 || k > n) {
    throw InvalidArgument("threshold_count: k must lie in [1, n], got k = " + std::to_string(k) +
                          ", n = " + std::to_string(n));
  }
  check_delta(delta);
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  const WalkPolicy policy = WalkPolicy::from_errors(oracle.noise(), delta / (2 * dn), delta / (2 * dk));

  const std::uint64_t start = oracle.queries();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (check_bit(oracle, i, policy).decided_one && ++count >= k) break;
  }
  return CountResult{count, oracle.queries() - start, false};
}

CountResult counting_one_sided(BitSource& oracle, double delta) {
  check_delta(delta);
  const NoiseModel& noise = oracle.noise();
  const std::size_t n = oracle.size();
  const std::uint64_t start = oracle.queries();
  if (n == 0) return CountResult{0, 0, false};

  const std::int64_t retire_at = stopping_threshold(noise, std::log(6.0 * static_cast<double>(n) / delta));
  auto stop_depth = [&](std::size_t k) {
    return stopping_threshold(noise, std::log(6.0 * static_cast<double>(k + 1) / delta));
  };

  // (c_i, -i): the top is the largest walk, lowest index among ties.
  using Entry = std::pair<std::int64_t, std::int64_t>;
  std::vector<Entry> initial;
  initial.reserve(n);
  for (std::size_t i = 0; i < n; ++i) initial.emplace_back(0, -static_cast<std::int64_t>(i));
  std::priority_queue<Entry> active(std::less<Entry>{}, std::move(initial));

  std::size_t k = 0;
  std::int64_t depth = stop_depth(k);
  while (!active.empty()) {
    auto [c, neg_index] = active.top();
    if (c <= -depth) break;
    active.pop();
    const auto i = static_cast<std::size_t>(-neg_index);
    if (oracle.query(i)) {
      if (++c >= retire_at) {
        ++k;
        depth = stop_depth(k);
        continue;
      }
    } else {
      --c;
    }
    active.emplace(c, neg_index);
  }
  return CountResult{k, oracle.queries() - start, false};
}

CountingWrapperOptions CountingWrapperOptions::desk_scale(std::size_t n) {
  const auto dn = static_cast<double>(std::max<std::size_t>(n, 2));
  return CountingWrapperOptions{static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))),
                                2.0 * std::log(dn)};
}

CountingWrapperOptions CountingWrapperOptions::paper_faithful(std::size_t n) {
  const auto dn = static_cast<double>(std::max<std::size_t>(n, 2));
  return CountingWrapperOptions{static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 0.99))),
                                100.0 * std::log(dn)};
}

CountResult counting_two_sided(BitSource& oracle, double delta,
                               const CountingWrapperOptions& options, Rng& rng) {
  check_delta(delta);
  if (options.presample_size < 1) throw InvalidArgument("counting_two_sided: presample size must be >= 1");
  const std::size_t n = oracle.size();
  if (n == 0) return CountResult{0, 0, false};

  const std::uint64_t start = oracle.queries();
  const WalkPolicy presample_policy = WalkPolicy::from_log_inverse(
      oracle.noise(), options.log_inverse_presample_error, options.log_inverse_presample_error);
  std::size_t sampled_ones = 0;
  for (std::size_t s = 0; s < options.presample_size; ++s) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    if (check_bit(oracle, i, presample_policy).decided_one) ++sampled_ones;
  }

  CountResult result;
  if (2 * sampled_ones <= options.presample_size) {
    result = counting_one_sided(oracle, delta);
  } else {
    ComplementView complement(oracle);
    result = counting_one_sided(complement, delta);
    result.value = n - result.value;
    result.flipped = true;
  }
  result.queries = oracle.queries() - start;
  return result;
}

CountResult counting_two_sided(BitSource& oracle, double delta, std::size_t presample_size,
                               double presample_error, Rng& rng) {
  check_delta(presample_error);
  return counting_two_sided(oracle, delta, CountingWrapperOptions{presample_size, -std::log(presample_error)},
                            rng);
}

}  // namespace noisyq
