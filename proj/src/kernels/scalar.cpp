#include <algorithm>
#include <bit>

#include "common.hpp"
#include "noisyq/rng.hpp"

namespace noisyq::kernels::scalar {

void simulate_walks(const WalkParams& params, std::uint64_t seed, std::uint64_t first_walker,
                    std::span<WalkRecord> out) {
  detail::validate_walk_params(params);
  for (std::size_t k = 0; k < out.size(); ++k) {
    Rng rng(derive_seed(seed, {first_walker + k}));
    std::int64_t pos = 0;
    std::uint64_t steps = 0;
    WalkOutcomeKind outcome;
    while (true) {
      pos += rng() < params.up_threshold ? 1 : -1;
      ++steps;
      if (pos >= params.upper) {
        outcome = WalkOutcomeKind::hit_upper;
        break;
      }
      if (pos <= -params.lower) {
        outcome = WalkOutcomeKind::hit_lower;
        break;
      }
      if (steps >= params.max_steps) {
        outcome = WalkOutcomeKind::truncated;
        break;
      }
    }
    out[k] = WalkRecord{outcome, steps};
  }
}

void flip_histogram(std::span<const std::uint64_t> table, int arity, int position,
                    std::span<std::uint64_t> counts) {
  detail::validate_histogram_args(table, arity, position, counts);
  std::fill(counts.begin(), counts.end(), 0);
  const std::uint64_t valid = arity >= 6 ? ~0ULL : ((1ULL << (1U << arity)) - 1);
  for (std::size_t j = 0; j < table.size(); ++j) {
    const std::uint64_t w = table[j];
    const std::uint64_t partner = position < 6 ? detail::swap_in_word(w, position)
                                               : table[j ^ (std::size_t{1} << (position - 6))];
    const std::uint64_t flips = (w ^ partner) & valid;
    if (flips == 0) continue;
    const auto base = static_cast<std::size_t>(std::popcount(j));
    for (std::size_t c = 0; c < detail::kWeightClassMasks.size(); ++c) {
      const int hits = std::popcount(flips & detail::kWeightClassMasks[c]);
      if (hits != 0) counts[base + c] += static_cast<std::uint64_t>(hits);
    }
  }
}

}  // namespace noisyq::kernels::scalar
