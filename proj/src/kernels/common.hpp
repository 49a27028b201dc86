#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>

#include "noisyq/kernels.hpp"
#include "noisyq/noise.hpp"

namespace noisyq::kernels::detail {

// Bits b in [0, 64) whose position has popcount c.
constexpr std::array<std::uint64_t, 7> kWeightClassMasks = [] {
  std::array<std::uint64_t, 7> masks{};
  for (unsigned b = 0; b < 64; ++b) masks[static_cast<std::size_t>(std::popcount(b))] |= 1ULL << b;
  return masks;
}();

// Positions with bit `i` clear, i < 6.
constexpr std::array<std::uint64_t, 6> kLowHalfMasks = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL};

inline std::uint64_t swap_in_word(std::uint64_t w, int i) noexcept {
  const unsigned shift = 1U << i;
  const std::uint64_t lo = kLowHalfMasks[static_cast<std::size_t>(i)];
  return ((w >> shift) & lo) | ((w & lo) << shift);
}

inline void validate_walk_params(const WalkParams& params) {
  if (params.upper < 1 || params.lower < 1) {
    throw InvalidArgument("simulate_walks: barriers must be at distance >= 1 from the start");
  }
  if (params.max_steps == 0) throw InvalidArgument("simulate_walks: max_steps must be positive");
}

inline void validate_histogram_args(std::span<const std::uint64_t> table, int arity, int position,
                                    std::span<std::uint64_t> counts) {
  if (arity < 1 || arity > 30) throw InvalidArgument("flip_histogram: arity out of range");
  if (position < 0 || position >= arity) throw InvalidArgument("flip_histogram: position out of range");
  const std::size_t words = arity >= 6 ? (std::size_t{1} << (arity - 6)) : 1;
  if (table.size() != words) throw InvalidArgument("flip_histogram: table size mismatch");
  if (counts.size() != static_cast<std::size_t>(arity) + 1) {
    throw InvalidArgument("flip_histogram: counts must have arity + 1 entries");
  }
}

}  // namespace noisyq::kernels::detail
