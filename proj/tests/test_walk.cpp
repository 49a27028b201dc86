#include <cmath>
#include <vector>

#include "doctest.h"
#include "noisyq/oracle.hpp"
#include "noisyq/stats.hpp"
#include "noisyq/walk.hpp"
#include "oracles.hpp"

using namespace noisyq;

TEST_CASE("stopping thresholds agree with 50-digit evaluation") {
  for (double p : {0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.45}) {
    for (double delta : {0.5, 0.2, 0.05, 0.01, 1e-3, 1e-6, 1e-12}) {
      const NoiseModel noise(p);
      CHECK(stopping_threshold(noise, -std::log(delta)) == oracles::threshold_50(p, delta));
    }
  }
}

TEST_CASE("asymmetric policy example thresholds") {
  const auto policy = WalkPolicy::from_errors(NoiseModel(0.2), 0.01, 0.5);
  CHECK(policy.up == 4);
  CHECK(policy.down == 1);
  CHECK(WalkPolicy::from_errors(NoiseModel(0.25), 0.5, 0.5) == WalkPolicy{1, 1});
}

TEST_CASE("exact integer ratios do not round up") {
  // delta = (p/(1-p))^3 gives log(1/delta)/L = 3 up to rounding.
  const NoiseModel noise(0.25);
  CHECK(stopping_threshold(noise, 3.0 * noise.log_ratio()) == 3);
  CHECK(stopping_threshold(noise, -std::log(std::pow(noise.odds(), 3.0))) == 3);
  CHECK(stopping_threshold(noise, 3.01 * noise.log_ratio()) == 4);
}

TEST_CASE("policies from logs reach far below double range") {
  const NoiseModel noise(0.2);
  const auto policy = WalkPolicy::from_log_inverse(noise, 100.0 * std::log(1000.0), 2.0);
  CHECK(policy.up == static_cast<std::int64_t>(std::ceil(100.0 * std::log(1000.0) / noise.log_ratio())));
  CHECK(policy.down == 2);
  CHECK_THROWS_AS(WalkPolicy::from_errors(noise, 0.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(WalkPolicy::from_errors(noise, 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(stopping_threshold(noise, -1.0), InvalidArgument);
}

TEST_CASE("run_walk stops at the first barrier crossing") {
  const std::vector<bool> answers{true, false, true, true, true};
  std::size_t i = 0;
  const auto outcome = run_walk(WalkPolicy{2, 2}, [&] { return answers[i++]; });
  CHECK(outcome.decided_one);
  CHECK(outcome.steps == 4);
  i = 0;
  const std::vector<bool> down{false};
  const auto quick = run_walk(WalkPolicy{1, 3}, [&] { return down[i++]; });
  CHECK_FALSE(quick.decided_one);
  CHECK(quick.steps == 1);
}

TEST_CASE("gambler's ruin closed forms") {
  CHECK(hitting_probability(0.25, 0) == 1.0);
  CHECK(hitting_probability(0.25, 2) == doctest::Approx(1.0 / 9.0));
  CHECK(expected_hitting_time(0.2, 3) == doctest::Approx(5.0));
  CHECK_THROWS_AS(hitting_probability(0.25, -1), InvalidArgument);
  CHECK_THROWS_AS(expected_hitting_time(0.6, 1), InvalidArgument);
}

TEST_CASE("check bit on a 1-bit matches the absorbing-chain solution") {
  // p = 0.2, delta0 = 0.01, delta1 = 0.5: barriers -1 and +4, up w.p. 0.8.
  const auto exact = oracles::two_barrier_walk(0.8L, 1, 4);
  CHECK(static_cast<double>(exact.expected_steps) == doctest::Approx(4.58944).epsilon(1e-5));
  CHECK(static_cast<double>(exact.p_upper) == doctest::Approx(0.75073).epsilon(1e-4));

  BitOracle oracle(std::vector<bool>{true}, NoiseModel(0.2), Rng(2024));
  const int trials = 100000;
  std::uint64_t ones = 0;
  CompensatedSum steps;
  for (int t = 0; t < trials; ++t) {
    const auto outcome = asymmetric_check_bit(oracle, 0, 0.01, 0.5);
    ones += outcome.decided_one ? 1 : 0;
    steps.add(static_cast<double>(outcome.steps));
  }
  const double rate = ones / double(trials);
  CHECK(std::abs(rate - static_cast<double>(exact.p_upper)) <
        4 * binomial_sigma(static_cast<double>(exact.p_upper), trials));
  CHECK(steps.value() / trials == doctest::Approx(static_cast<double>(exact.expected_steps)).epsilon(0.02));
  CHECK(oracle.queries() == static_cast<std::uint64_t>(steps.value()));
}

TEST_CASE("absorbing-chain oracle reduces to the one-barrier law") {
  // With the upper barrier far away, P(upper) -> 0 and E[steps] -> a/(1-2p).
  const auto far = oracles::two_barrier_walk(0.25L, 3, 200);
  CHECK(static_cast<double>(far.expected_steps) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(static_cast<double>(far.p_upper) < 1e-90);
}

TEST_CASE("check edge queries the requested pair") {
  const std::vector<Edge> edges{Edge::make(0, 1)};
  EdgeOracle oracle(3, edges, NoiseModel(0.1), Rng(8), true);
  const auto policy = WalkPolicy::from_errors(NoiseModel(0.1), 1e-6, 1e-6);
  CHECK(check_edge(oracle, 1, 0, policy).decided_one);
  CHECK_FALSE(check_edge(oracle, 1, 2, policy).decided_one);
  CHECK(oracle.ledger().count(pair_index(0, 2, 3)) == 0);
}

TEST_CASE("simulated hitting frequencies follow (p/(1-p))^x") {
  for (double p : {0.1, 0.3}) {
    for (std::int64_t x : {1, 3}) {
      const auto tally = simulate_hitting(p, x, 200000, 99);
      const double expect = hitting_probability(p, x);
      const double rate = tally.hits / double(tally.walks);
      CHECK(std::abs(rate - expect) < 4 * binomial_sigma(expect, tally.walks));
      CHECK(tally.floor_level >= 1);
    }
  }
  const auto trivial = simulate_hitting(0.2, 0, 10, 1);
  CHECK(trivial.hits == 10);
}

TEST_CASE("simulated first passage means follow x/(1-2p)") {
  const auto tally = simulate_first_passage(0.25, 4, 200000, 5);
  CHECK(tally.walks == 200000);
  CHECK(tally.mean() == doctest::Approx(8.0).epsilon(0.02));
  CHECK(tally.stddev() > 0.0);
  CHECK_THROWS_AS(simulate_first_passage(0.25, 0, 10, 1), InvalidArgument);
}

TEST_CASE("walk simulators are deterministic in the seed") {
  const auto a = simulate_first_passage(0.4, 2, 5000, 17);
  const auto b = simulate_first_passage(0.4, 2, 5000, 17);
  CHECK(a.total_steps == b.total_steps);
  CHECK(a.total_sq_steps == b.total_sq_steps);
  CHECK(simulate_hitting(0.4, 2, 5000, 17).hits == simulate_hitting(0.4, 2, 5000, 17).hits);
}
