#include <atomic>
#include <cstdlib>
#include <string>

#include "noisyq/kernels.hpp"
#include "noisyq/noise.hpp"

namespace noisyq::kernels {
namespace {

bool host_has_avx2() noexcept {
#if defined(NOISYQ_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

SimdLevel initial_level() noexcept {
  const SimdLevel best = host_has_avx2() ? SimdLevel::avx2 : SimdLevel::scalar;
  if (const char* env = std::getenv("NOISYQ_SIMD")) {
    if (std::string(env) == "scalar") return SimdLevel::scalar;
  }
  return best;
}

std::atomic<SimdLevel>& level_slot() noexcept {
  static std::atomic<SimdLevel> level{initial_level()};
  return level;
}

}  // namespace

std::string_view to_string(SimdLevel level) noexcept {
  switch (level) {
    case SimdLevel::avx2:
      return "avx2";
    case SimdLevel::scalar:
      break;
  }
  return "scalar";
}

SimdLevel detected_level() noexcept {
  return host_has_avx2() ? SimdLevel::avx2 : SimdLevel::scalar;
}

SimdLevel active_level() noexcept { return level_slot().load(std::memory_order_relaxed); }

void set_active_level(SimdLevel level) {
  if (level == SimdLevel::avx2 && !host_has_avx2()) {
    throw InvalidArgument("AVX2 kernels are not available on this host");
  }
  level_slot().store(level, std::memory_order_relaxed);
}

void simulate_walks(const WalkParams& params, std::uint64_t seed, std::uint64_t first_walker,
                    std::span<WalkRecord> out) {
#ifdef NOISYQ_HAVE_AVX2_KERNELS
  if (active_level() == SimdLevel::avx2) {
    avx2::simulate_walks(params, seed, first_walker, out);
    return;
  }
#endif
  scalar::simulate_walks(params, seed, first_walker, out);
}

void flip_histogram(std::span<const std::uint64_t> table, int arity, int position,
                    std::span<std::uint64_t> counts) {
#ifdef NOISYQ_HAVE_AVX2_KERNELS
  if (active_level() == SimdLevel::avx2) {
    avx2::flip_histogram(table, arity, position, counts);
    return;
  }
#endif
  scalar::flip_histogram(table, arity, position, counts);
}

}  // namespace noisyq::kernels
