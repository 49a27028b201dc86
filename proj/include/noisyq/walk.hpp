#pragma once

#include <cstddef>
#include <cstdint>

#include "noisyq/noise.hpp"
#include "noisyq/oracle.hpp"

namespace noisyq {

/// Integer stopping thresholds of the asymmetric bit test. The running
/// statistic d = #ones - #zeros stops at -down (declare 0) or +up (declare 1).
struct WalkPolicy {
  std::int64_t down = 1;
  std::int64_t up = 1;

  /// down = ceil(log(1/delta1) / log((1-p)/p)), up = ceil(log(1/delta0) / log((1-p)/p)).
  static WalkPolicy from_errors(const NoiseModel& noise, double delta0, double delta1);
  /// Same, taking log(1/delta0) and log(1/delta1) directly so that errors far
  /// below double range (e.g. n^-100) stay representable.
  static WalkPolicy from_log_inverse(const NoiseModel& noise, double log_inv_delta0,
                                     double log_inv_delta1);

  friend bool operator==(const WalkPolicy&, const WalkPolicy&) = default;
};

/// ceil(log_inverse_error / log((1-p)/p)), at least 1. Values within a
/// relative 1e-9 of an integer snap to it before the ceiling.
std::int64_t stopping_threshold(const NoiseModel& noise, double log_inverse_error);

struct WalkOutcome {
  bool decided_one = false;
  std::uint64_t steps = 0;
};

/// Runs the two-threshold walk, drawing answers from `sample()`.
template <class Sample>
WalkOutcome run_walk(const WalkPolicy& policy, Sample&& sample) {
  std::int64_t d = 0;
  std::uint64_t steps = 0;
  while (true) {
    d += sample() ? 1 : -1;
    ++steps;
    if (d <= -policy.down) return {false, steps};
    if (d >= policy.up) return {true, steps};
  }
}

/// Probability that a walk stepping +1 w.p. p < 1/2 (else -1) ever reaches x >= 0.
double hitting_probability(double p, std::int64_t x);
/// Mean number of steps for the same walk to first reach -x <= 0.
double expected_hitting_time(double p, std::int64_t x);

/// Asymmetric-Check-Bit: error <= delta0 on a 0-bit, <= delta1 on a 1-bit.
WalkOutcome asymmetric_check_bit(BitSource& oracle, std::size_t i, double delta0, double delta1);
WalkOutcome check_bit(BitSource& oracle, std::size_t i, double delta);
WalkOutcome check_bit(BitSource& oracle, std::size_t i, const WalkPolicy& policy);
WalkOutcome check_edge(EdgeSource& oracle, int u, int v, const WalkPolicy& policy);

/// Monte Carlo tallies of the gambler's-ruin walk, computed with the
/// dispatched batch kernel. Walker w draws from derive_seed(seed, {w}).
struct HittingTally {
  std::uint64_t walks = 0;
  std::uint64_t hits = 0;
  std::int64_t floor_level = 0;  // walks touching -floor_level count as misses
};

/// Estimates P(ever reach +x) with an absorbing floor placed so that
/// P(reach +x after touching the floor) <= truncation_bias.
HittingTally simulate_hitting(double p, std::int64_t x, std::uint64_t walks, std::uint64_t seed,
                              double truncation_bias = 1e-9);

struct PassageTally {
  std::uint64_t walks = 0;
  std::uint64_t total_steps = 0;
  unsigned __int128 total_sq_steps = 0;

  double mean() const noexcept;
  double stddev() const noexcept;
};

/// First-passage times of the same walk to -x, x >= 1.
PassageTally simulate_first_passage(double p, std::int64_t x, std::uint64_t walks,
                                    std::uint64_t seed);

}  // namespace noisyq
