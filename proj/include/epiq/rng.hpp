#pragma once

#include <cstdint>
#include <random>

namespace epiq {

/// The single generator used for every stochastic routine.
using Rng = std::mt19937_64;

/// Independent stream for (seed, stream index). Runs and shards each take their
/// own stream so results do not depend on execution order.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x65706971u};
  return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace epiq
