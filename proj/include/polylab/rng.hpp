#pragma once

#include <cstdint>

#include "polylab/lattice.hpp"

namespace polylab {

// SplitMix64 scrambler. All randomness in the lab is counter-based: a value is
// a pure function of (seed, coordinates / index), so sampling order and thread
// count never change the result.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

inline uint64_t site_hash(uint64_t seed, const Point& p) {
    uint64_t h = splitmix64(seed);
    for (int i = 0; i < kMaxDims; ++i)
        h = hash_combine(h, static_cast<uint64_t>(static_cast<uint32_t>(p.c[i])) + 1);
    return h;
}

// Uniform in [0, 1) with 53 random bits.
inline double u01_from_bits(uint64_t h) {
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

inline double site_u01(uint64_t seed, const Point& p) { return u01_from_bits(site_hash(seed, p)); }

// Derived stream seed for the i-th member of an ensemble.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
    return hash_combine(base, 0x5851f42d4c957f2dULL + index);
}

}  // namespace polylab
