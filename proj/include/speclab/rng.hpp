#pragma once

#include <cstdint>

namespace speclab::rng {

// Counter-based stream built from chained splitmix64 finalizers.  Every draw is a
// pure function of (seed, sample, entry), so parallel and serial generation yield
// identical values and any single entry can be regenerated in isolation.

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t chain(std::uint64_t seed, std::uint64_t sample,
                                            std::uint64_t entry) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ sample) ^ entry);
}

// Top 53 bits mapped to [0, 1).
[[nodiscard]] constexpr double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

[[nodiscard]] constexpr double uniform01(std::uint64_t seed, std::uint64_t sample,
                                         std::uint64_t entry) noexcept {
  return to_unit(chain(seed, sample, entry));
}

[[nodiscard]] constexpr double uniform(std::uint64_t seed, std::uint64_t sample,
                                       std::uint64_t entry, double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform01(seed, sample, entry);
}

}  // namespace speclab::rng
