#pragma once

#include <cstdint>

namespace almlab {

// Counter-based generator: every draw is a pure function of (seed, stream, index),
// so any draw can be reproduced without replaying the ones before it.
inline std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix(splitmix(splitmix(seed) ^ stream) ^ index);
}

// Uniform on [0,1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(counter_hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return counter_hash(seed ^ 0x5851f42d4c957f2dull, a, b);
}

}  // namespace almlab
