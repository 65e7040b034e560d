#pragma once

#include <cstdint>
#include <random>

namespace regfind {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one engine output,
// so every draw consumes exactly one value from the stream.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for stream `index` derived from a base seed; independent of how the
// streams are later distributed across threads.
constexpr std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(base_seed) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

}  // namespace regfind
