#include "osc/rng.hpp"

#include <array>

namespace osc {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, Stream stream) {
  std::uint64_t state = seed ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ull);
  std::array<std::uint32_t, 8> words{};
  for (std::size_t k = 0; k < words.size(); k += 2) {
    const std::uint64_t v = splitmix64(state);
    words[k] = static_cast<std::uint32_t>(v);
    words[k + 1] = static_cast<std::uint32_t>(v >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

}  // namespace osc
