#pragma once

// Counter-based seed derivation. Every random draw in the library comes from
// a std::mt19937_64 whose seed is a hash of (master seed, tag path). Trials,
// links and methods therefore never share a stream, and the value a stream
// produces does not depend on the order in which streams are created.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rislab {

using Rng = std::mt19937_64;

namespace stream_tag {
inline constexpr std::uint64_t trial = 0x7472;
inline constexpr std::uint64_t direct = 0x6864;
inline constexpr std::uint64_t incident = 0x6869;
inline constexpr std::uint64_t reflective = 0x6772;
inline constexpr std::uint64_t csi = 0x6373;
inline constexpr std::uint64_t init = 0x6930;
inline constexpr std::uint64_t method = 0x6d65;
inline constexpr std::uint64_t layout = 0x6c61;
}  // namespace stream_tag

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// seed' = mix(mix(mix(seed) ^ t0) ^ t1) ...
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t t : path) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(seed, path));
}

}  // namespace rislab
