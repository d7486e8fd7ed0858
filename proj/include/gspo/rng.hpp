#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gspo {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for a named sub-stream, so adding a stream never shifts another.
inline std::uint64_t deriveSeed(std::uint64_t seed, std::string_view stream,
                                std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(seed ^ h) + index);
}

inline Rng makeRng(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0) {
    return Rng(deriveSeed(seed, stream, index));
}

}  // namespace gspo
