#pragma once

// Counter-based randomness. Every draw is a pure function of a seed and a
// tuple of integer keys, so a simulation can look up "the erasure of the
// t-th packet of stream s at receiver n" without carrying generator state.

#include <cstdint>

namespace sgnc {

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

template <class... Words>
constexpr std::uint64_t hash_words(std::uint64_t seed, Words... words) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h ^ static_cast<std::uint64_t>(words))), ...);
  return h;
}

/// Maps a 64-bit word to [0, 1) using its top 53 bits.
constexpr double to_unit(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// Domain tags keep independent families of draws from colliding.
enum class Domain : std::uint64_t {
  erasure = 0x45,
  coefficient = 0x43,
  payload = 0x50,
  trial = 0x54,
};

}  // namespace sgnc
