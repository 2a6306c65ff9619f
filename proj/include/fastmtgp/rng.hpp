#pragma once

#include <cmath>
#include <cstdint>

// Counter-based pseudo-random values: every draw is a pure function of
// (seed, stream, counter), so any consumer can be reproduced in isolation
// and substreams never collide by construction (nested splitmix64).

namespace fastmtgp::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t rand_u64(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) {
    // (stream+1)-th splitmix output of seed reseeds a second splitmix,
    // whose (counter+1)-th output is the draw.
    const std::uint64_t sub = mix64(seed + kGolden * (stream + 1));
    return mix64(sub + kGolden * (counter + 1));
}

// 53-bit fraction bits (numerator of k/2^53).
constexpr std::uint64_t bits53(std::uint64_t seed, std::uint64_t stream,
                               std::uint64_t counter) {
    return rand_u64(seed, stream, counter) >> 11;
}

inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(bits53(seed, stream, counter)) * 0x1p-53;
}

// Standard normal via Box-Muller; consumes counters 2k and 2k+1.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
    double u1 = uniform01(seed, stream, 2 * k);
    const double u2 = uniform01(seed, stream, 2 * k + 1);
    if (u1 <= 0.0) u1 = 0x1p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace fastmtgp::rng
