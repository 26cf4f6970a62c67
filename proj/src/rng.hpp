#pragma once

#include <cstdint>
#include <random>

namespace cgl {

/// SplitMix64 finalizer; decorrelates neighbouring seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for (seed, stream, index). Streams let one seed feed
/// several consumers; index splits ensembles so members are order-independent.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return std::mt19937_64(mix64(mix64(mix64(seed) ^ stream) ^ (index * 0xd1342543de82ef95ULL)));
}

namespace streams {
inline constexpr std::uint64_t ou_anchor = 1;
inline constexpr std::uint64_t ou_forward = 2;
inline constexpr std::uint64_t ou_backward = 3;
inline constexpr std::uint64_t initial_states = 4;
inline constexpr std::uint64_t test_states = 5;
}  // namespace streams

}  // namespace cgl
