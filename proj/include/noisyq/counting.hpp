#pragma once

#include <cstddef>
#include <cstdint>

#include "noisyq/oracle.hpp"
#include "noisyq/rng.hpp"

namespace noisyq {

struct CountResult {
  std::size_t value = 0;
  std::uint64_t queries = 0;
  /// Two-sided counting only: the complemented orientation was used.
  bool flipped = false;
};

/// Threshold-Count: scans the input, classifying each bit with the
/// asymmetric test (delta0 = delta/2n, delta1 = delta/2k), and returns k as
/// soon as k bits were declared 1. Returns min{k, |a|} w.p. >= 1 - delta.
CountResult threshold_count(BitSource& oracle, std::size_t k, double delta);

/// One-sided Counting. Every index carries a walk c_i; the active index with
/// the largest c_i (lowest index on ties) is queried next. An index retires
/// into the count once c_i >= ceil(log(6n/delta)/log((1-p)/p)); the run ends
/// when the best active walk is <= -ceil(log(6(k+1)/delta)/log((1-p)/p)) or
/// when no index is active.
CountResult counting_one_sided(BitSource& oracle, double delta);

struct CountingWrapperOptions {
  std::size_t presample_size = 1;
  /// log(1/e) for the per-sample Check-Bit error e.
  double log_inverse_presample_error = 1.0;

  /// ceil(sqrt(n)) samples at error 1/n^2.
  static CountingWrapperOptions desk_scale(std::size_t n);
  /// ceil(n^0.99) samples at error 1/n^100.
  static CountingWrapperOptions paper_faithful(std::size_t n);
};

/// Two-sided Counting: a presample with replacement picks the orientation
/// (majority of ones => count zeros on the complemented channel and return
/// n minus that). Exactness holds in both orientations; only cost differs.
CountResult counting_two_sided(BitSource& oracle, double delta,
                               const CountingWrapperOptions& options, Rng& rng);
CountResult counting_two_sided(BitSource& oracle, double delta, std::size_t presample_size,
                               double presample_error, Rng& rng);

}  // namespace noisyq
