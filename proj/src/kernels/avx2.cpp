// Compiled with -mavx2; only reached through dispatch after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <bit>

#include "common.hpp"
#include "noisyq/rng.hpp"

namespace noisyq::kernels::avx2 {
namespace {

inline __m256i rotl64(__m256i x, int k) {
  return _mm256_or_si256(_mm256_slli_epi64(x, k), _mm256_srli_epi64(x, 64 - k));
}

// Four independent xoshiro256** generators, one per 64-bit lane.
struct LaneRng {
  __m256i s0, s1, s2, s3;

  __m256i next() {
    const __m256i times5 = _mm256_add_epi64(_mm256_slli_epi64(s1, 2), s1);
    const __m256i rot = rotl64(times5, 7);
    const __m256i result = _mm256_add_epi64(_mm256_slli_epi64(rot, 3), rot);
    const __m256i t = _mm256_slli_epi64(s1, 17);
    s2 = _mm256_xor_si256(s2, s0);
    s3 = _mm256_xor_si256(s3, s1);
    s1 = _mm256_xor_si256(s1, s2);
    s0 = _mm256_xor_si256(s0, s3);
    s2 = _mm256_xor_si256(s2, t);
    s3 = rotl64(s3, 45);
    return result;
  }
};

// Mula's nibble-LUT popcount, one count per 64-bit lane.
inline __m256i popcount64(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0F);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

}  // namespace

void simulate_walks(const WalkParams& params, std::uint64_t seed, std::uint64_t first_walker,
                    std::span<WalkRecord> out) {
  detail::validate_walk_params(params);
  constexpr int kLanes = 4;
  const std::size_t total = out.size();

  alignas(32) std::array<std::uint64_t, kLanes> s0{}, s1{}, s2{}, s3{};
  alignas(32) std::array<std::int64_t, kLanes> pos{};
  alignas(32) std::array<std::uint64_t, kLanes> steps{};
  std::array<std::int64_t, kLanes> walker{};  // index into out, -1 when idle

  std::size_t next = 0;
  auto load_lane = [&](int lane) {
    if (next < total) {
      const Rng rng(derive_seed(seed, {first_walker + next}));
      const auto& st = rng.state();
      s0[lane] = st[0];
      s1[lane] = st[1];
      s2[lane] = st[2];
      s3[lane] = st[3];
      walker[lane] = static_cast<std::int64_t>(next++);
    } else {
      walker[lane] = -1;
    }
    pos[lane] = 0;
    steps[lane] = 0;
  };
  for (int lane = 0; lane < kLanes; ++lane) load_lane(lane);

  const __m256i sign = _mm256_set1_epi64x(static_cast<std::int64_t>(0x8000000000000000ULL));
  const __m256i threshold =
      _mm256_xor_si256(_mm256_set1_epi64x(static_cast<std::int64_t>(params.up_threshold)), sign);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i upper_minus_one = _mm256_set1_epi64x(params.upper - 1);
  const __m256i neg_lower_plus_one = _mm256_set1_epi64x(-params.lower + 1);
  // steps compare as signed; the cap is clamped so it stays representable.
  const std::uint64_t cap = std::min<std::uint64_t>(params.max_steps, 0x7FFFFFFFFFFFFFFFULL);
  const __m256i cap_minus_one = _mm256_set1_epi64x(static_cast<std::int64_t>(cap - 1));

  auto load = [](const auto& a) { return _mm256_load_si256(reinterpret_cast<const __m256i*>(a.data())); };
  auto store = [](auto& a, __m256i v) { _mm256_store_si256(reinterpret_cast<__m256i*>(a.data()), v); };

  LaneRng rng{load(s0), load(s1), load(s2), load(s3)};
  __m256i p = load(pos);
  __m256i n = load(steps);

  while (std::any_of(walker.begin(), walker.end(), [](std::int64_t w) { return w >= 0; })) {
    __m256i done;
    do {
      const __m256i r = _mm256_xor_si256(rng.next(), sign);
      const __m256i up = _mm256_cmpgt_epi64(threshold, r);  // -1 where r < threshold
      p = _mm256_sub_epi64(_mm256_sub_epi64(p, one), _mm256_add_epi64(up, up));
      n = _mm256_add_epi64(n, one);
      done = _mm256_or_si256(
          _mm256_or_si256(_mm256_cmpgt_epi64(p, upper_minus_one),
                          _mm256_cmpgt_epi64(neg_lower_plus_one, p)),
          _mm256_cmpgt_epi64(n, cap_minus_one));
    } while (_mm256_testz_si256(done, done));

    const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(done));
    store(pos, p);
    store(steps, n);
    store(s0, rng.s0);
    store(s1, rng.s1);
    store(s2, rng.s2);
    store(s3, rng.s3);
    for (int lane = 0; lane < kLanes; ++lane) {
      if (!(mask & (1 << lane))) continue;
      if (walker[lane] >= 0) {
        WalkOutcomeKind outcome = WalkOutcomeKind::truncated;
        if (pos[lane] >= params.upper) {
          outcome = WalkOutcomeKind::hit_upper;
        } else if (pos[lane] <= -params.lower) {
          outcome = WalkOutcomeKind::hit_lower;
        }
        out[static_cast<std::size_t>(walker[lane])] = WalkRecord{outcome, steps[lane]};
      }
      load_lane(lane);
    }
    rng = LaneRng{load(s0), load(s1), load(s2), load(s3)};
    p = load(pos);
    n = load(steps);
  }
}

void flip_histogram(std::span<const std::uint64_t> table, int arity, int position,
                    std::span<std::uint64_t> counts) {
  detail::validate_histogram_args(table, arity, position, counts);
  if (table.size() < 4) {
    scalar::flip_histogram(table, arity, position, counts);
    return;
  }
  std::fill(counts.begin(), counts.end(), 0);

  constexpr std::size_t kClasses = detail::kWeightClassMasks.size();
  __m256i class_masks[kClasses];
  for (std::size_t c = 0; c < kClasses; ++c) {
    class_masks[c] = _mm256_set1_epi64x(static_cast<std::int64_t>(detail::kWeightClassMasks[c]));
  }
  const int shift = position < 6 ? (1 << position) : 0;
  const __m256i low_half = _mm256_set1_epi64x(
      static_cast<std::int64_t>(position < 6 ? detail::kLowHalfMasks[static_cast<std::size_t>(position)] : 0));
  const std::size_t stride = position >= 6 ? (std::size_t{1} << (position - 6)) : 0;

  alignas(32) std::array<std::uint64_t, 4> lane_counts{};
  for (std::size_t j = 0; j < table.size(); j += 4) {
    const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(table.data() + j));
    __m256i partner;
    if (position < 6) {
      partner = _mm256_or_si256(
          _mm256_and_si256(_mm256_srli_epi64(w, shift), low_half),
          _mm256_slli_epi64(_mm256_and_si256(w, low_half), shift));
    } else if (stride == 1) {
      partner = _mm256_permute4x64_epi64(w, 0xB1);
    } else if (stride == 2) {
      partner = _mm256_permute4x64_epi64(w, 0x4E);
    } else {
      partner = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(table.data() + (j ^ stride)));
    }
    const __m256i flips = _mm256_xor_si256(w, partner);
    if (_mm256_testz_si256(flips, flips)) continue;

    const auto base = static_cast<std::size_t>(std::popcount(j >> 2));
    // low two bits of the word index contribute 0, 1, 1, 2 to the weight
    constexpr std::array<std::size_t, 4> lane_offset = {0, 1, 1, 2};
    for (std::size_t c = 0; c < kClasses; ++c) {
      _mm256_store_si256(reinterpret_cast<__m256i*>(lane_counts.data()),
                         popcount64(_mm256_and_si256(flips, class_masks[c])));
      for (std::size_t lane = 0; lane < 4; ++lane) {
        if (lane_counts[lane] != 0) counts[base + lane_offset[lane] + c] += lane_counts[lane];
      }
    }
  }
}

}  // namespace noisyq::kernels::avx2
