#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gcp {

// FNV-1a. std::hash is not guaranteed stable across library versions, and
// survey outputs must be reproducible from the seed alone.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-derived stream: identical components give an identical generator
// regardless of the order streams are created in, so per-image and per-tile
// work can run in any order (or in parallel) without changing output.
inline std::mt19937_64 derive_rng(std::uint64_t seed, std::string_view tag,
                                  std::string_view id = {}, std::int64_t a = 0,
                                  std::int64_t b = 0) {
    std::uint64_t h = splitmix64(seed ^ fnv1a64(tag));
    h = splitmix64(h ^ fnv1a64(id));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(a) * 0x9e3779b97f4a7c15ull));
    h = splitmix64(h ^ static_cast<std::uint64_t>(b));
    return std::mt19937_64(h);
}

}  // namespace gcp
