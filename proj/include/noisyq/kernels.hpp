#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant; callers go through the
// dispatching entry points, which select the best level supported by the
// host at first use. Set NOISYQ_SIMD=scalar to force the reference path.

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace noisyq::kernels {

enum class SimdLevel { scalar, avx2 };

std::string_view to_string(SimdLevel level) noexcept;

/// Best level this binary and host can run.
SimdLevel detected_level() noexcept;
/// Level the dispatching entry points currently use.
SimdLevel active_level() noexcept;
/// Overrides dispatch; throws InvalidArgument if the level is unsupported.
void set_active_level(SimdLevel level);

/// A +-1 walk started at 0 that steps up when rng() < up_threshold.
/// Absorbed at +upper (outcome hit_upper), at -lower (hit_lower), or after
/// max_steps (truncated); checked in that order after every step.
struct WalkParams {
  std::uint64_t up_threshold = 0;
  std::int64_t upper = std::numeric_limits<std::int64_t>::max();
  std::int64_t lower = std::numeric_limits<std::int64_t>::max();
  std::uint64_t max_steps = std::numeric_limits<std::uint64_t>::max();
};

enum class WalkOutcomeKind : std::uint32_t { hit_lower = 0, hit_upper = 1, truncated = 2 };

struct WalkRecord {
  WalkOutcomeKind outcome = WalkOutcomeKind::truncated;
  std::uint64_t steps = 0;

  friend bool operator==(const WalkRecord&, const WalkRecord&) = default;
};

/// Simulates walkers first_walker .. first_walker + out.size() - 1; walker w
/// draws from Rng(derive_seed(seed, {w})). Requires upper >= 1, lower >= 1.
void simulate_walks(const WalkParams& params, std::uint64_t seed, std::uint64_t first_walker,
                    std::span<WalkRecord> out);

/// Truth-table flip histogram. `table` holds 2^arity bits, input x at bit
/// (x mod 64) of word x / 64. counts[w] receives the number of inputs x with
/// popcount(x) = w and f(x) != f(x xor 2^position); counts.size() must be
/// arity + 1.
void flip_histogram(std::span<const std::uint64_t> table, int arity, int position,
                    std::span<std::uint64_t> counts);

namespace scalar {
void simulate_walks(const WalkParams& params, std::uint64_t seed, std::uint64_t first_walker,
                    std::span<WalkRecord> out);
void flip_histogram(std::span<const std::uint64_t> table, int arity, int position,
                    std::span<std::uint64_t> counts);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define NOISYQ_HAVE_AVX2_KERNELS 1
namespace avx2 {
void simulate_walks(const WalkParams& params, std::uint64_t seed, std::uint64_t first_walker,
                    std::span<WalkRecord> out);
void flip_histogram(std::span<const std::uint64_t> table, int arity, int position,
                    std::span<std::uint64_t> counts);
}  // namespace avx2
#endif

}  // namespace noisyq::kernels
