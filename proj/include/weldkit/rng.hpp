#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace weldkit {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Stable per-item seed: independent of iteration order and worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view key, std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a(key)) + index);
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(Rng& rng, double sigma) {
    return std::normal_distribution<double>(0.0, sigma)(rng);
}

}  // namespace weldkit
