#pragma once

#include <cstdint>
#include <random>

namespace udn {

using RandomStream = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent stream for trial `index` under `master_seed`. The stream
/// depends only on the pair, so trials can run in any order or thread.
inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  const std::uint64_t a = mix64(master_seed);
  const std::uint64_t b = mix64(a ^ mix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return RandomStream(seq);
}

/// Uniform on the open interval (0, 1).
inline double open_uniform(RandomStream& rng) {
  // 53 random bits, offset by half an ulp so 0 is never returned.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace udn
