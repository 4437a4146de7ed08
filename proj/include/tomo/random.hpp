#pragma once

#include <cstdint>
#include <random>

namespace tomo {

// SplitMix64 step (Vigna). Used to derive independent per-replica streams
// from a (seed, stream index) pair, so sampling is reproducible under
// parallel generation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic engine for stream `index` of a master seed.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s))};
    return std::mt19937_64(seq);
}

/// Uniform double in [0,1) from the top 53 bits; identical across platforms
/// for a given engine state (avoids std::uniform_real_distribution, whose
/// output is implementation-defined).
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace tomo
