#include <bit>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "noisyq/kernels.hpp"
#include "noisyq/noise.hpp"
#include "noisyq/rng.hpp"

using namespace noisyq;
using namespace noisyq::kernels;

namespace {

// Straight-line walk used as the reference for both kernel levels.
std::vector<WalkRecord> reference_walks(const WalkParams& params, std::uint64_t seed,
                                        std::uint64_t first, std::size_t count) {
  std::vector<WalkRecord> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    Rng rng(derive_seed(seed, {first + j}));
    std::int64_t pos = 0;
    std::uint64_t steps = 0;
    while (true) {
      pos += rng() < params.up_threshold ? 1 : -1;
      ++steps;
      if (pos >= params.upper) {
        out[j] = {WalkOutcomeKind::hit_upper, steps};
        break;
      }
      if (pos <= -params.lower) {
        out[j] = {WalkOutcomeKind::hit_lower, steps};
        break;
      }
      if (steps >= params.max_steps) {
        out[j] = {WalkOutcomeKind::truncated, steps};
        break;
      }
    }
  }
  return out;
}

std::vector<std::uint64_t> reference_histogram(const std::vector<std::uint64_t>& table, int arity,
                                               int position) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(arity) + 1, 0);
  auto bit = [&](std::uint64_t x) { return (table[x >> 6] >> (x & 63)) & 1; };
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << arity); ++x) {
    if (bit(x) != bit(x ^ (std::uint64_t{1} << position))) ++counts[std::popcount(x)];
  }
  return counts;
}

std::vector<std::uint64_t> random_table(int arity, Rng& rng) {
  const std::size_t words = arity >= 6 ? std::size_t{1} << (arity - 6) : 1;
  std::vector<std::uint64_t> table(words);
  for (auto& w : table) w = rng();
  if (arity < 6) table[0] &= (std::uint64_t{1} << (std::uint64_t{1} << arity)) - 1;
  return table;
}

const std::vector<WalkParams> kWalkCases = {
    {bernoulli_threshold(0.2), 4, 1, 1000},
    {bernoulli_threshold(0.8), 4, 1, 1000},
    {bernoulli_threshold(0.25), 6, 40, 1u << 20},
    {bernoulli_threshold(0.4), 3, 3, 5},
    {bernoulli_threshold(0.5), 50, 50, 1u << 30},
    {bernoulli_threshold(0.1), 1, 1, 1},
};

}  // namespace

TEST_CASE("scalar walk kernel matches the reference walk") {
  for (const auto& params : kWalkCases) {
    std::vector<WalkRecord> got(1001);
    scalar::simulate_walks(params, 42, 17, got);
    CHECK(got == reference_walks(params, 42, 17, got.size()));
  }
}

#ifdef NOISYQ_HAVE_AVX2_KERNELS
TEST_CASE("avx2 walk kernel is record-for-record identical to scalar") {
  if (detected_level() != SimdLevel::avx2) return;
  for (const auto& params : kWalkCases) {
    for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 999u, 4096u}) {
      std::vector<WalkRecord> a(count), b(count);
      scalar::simulate_walks(params, 7, 100, a);
      avx2::simulate_walks(params, 7, 100, b);
      CHECK(a == b);
    }
  }
}

TEST_CASE("avx2 flip histogram matches scalar for every arity and position") {
  if (detected_level() != SimdLevel::avx2) return;
  Rng rng(123);
  for (int arity = 1; arity <= 14; ++arity) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto table = random_table(arity, rng);
      for (int position = 0; position < arity; ++position) {
        std::vector<std::uint64_t> a(static_cast<std::size_t>(arity) + 1), b(a.size());
        scalar::flip_histogram(table, arity, position, a);
        avx2::flip_histogram(table, arity, position, b);
        CHECK(a == b);
      }
    }
  }
}
#endif

TEST_CASE("scalar flip histogram matches brute force") {
  Rng rng(77);
  for (int arity = 1; arity <= 12; ++arity) {
    const auto table = random_table(arity, rng);
    for (int position = 0; position < arity; ++position) {
      std::vector<std::uint64_t> counts(static_cast<std::size_t>(arity) + 1);
      scalar::flip_histogram(table, arity, position, counts);
      CHECK(counts == reference_histogram(table, arity, position));
    }
  }
}

TEST_CASE("dispatch can be forced to the scalar level") {
  const SimdLevel before = active_level();
  set_active_level(SimdLevel::scalar);
  CHECK(active_level() == SimdLevel::scalar);
  CHECK(to_string(SimdLevel::scalar) == "scalar");
  std::vector<WalkRecord> a(64), b(64);
  simulate_walks(kWalkCases[0], 5, 0, a);
  scalar::simulate_walks(kWalkCases[0], 5, 0, b);
  CHECK(a == b);
  set_active_level(before);
}

TEST_CASE("kernels reject malformed arguments") {
  std::vector<WalkRecord> out(4);
  CHECK_THROWS_AS(simulate_walks({0, 0, 1, 10}, 1, 0, out), InvalidArgument);
  CHECK_THROWS_AS(simulate_walks({0, 1, 0, 10}, 1, 0, out), InvalidArgument);
  CHECK_THROWS_AS(simulate_walks({0, 1, 1, 0}, 1, 0, out), InvalidArgument);
  std::vector<std::uint64_t> table(1, 0), counts(3);
  CHECK_THROWS_AS(flip_histogram(table, 2, 2, counts), InvalidArgument);
  CHECK_THROWS_AS(flip_histogram(table, 3, 0, counts), InvalidArgument);
}
