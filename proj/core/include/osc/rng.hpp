#pragma once

#include <cstdint>
#include <random>

namespace osc {

/// Identifies an independent random substream within one trial.
enum class Stream : std::uint64_t { noise = 1, tie_break = 2 };

/// Mersenne Twister (mt19937_64) seeded through SplitMix64 from a
/// (seed, stream) pair. Outputs are fully specified by the standard, and the
/// unit-interval conversion below is done by hand instead of through
/// std::uniform_real_distribution, so streams are byte-stable across
/// standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, Stream stream);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace osc
