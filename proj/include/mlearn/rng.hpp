#pragma once

#include <cstdint>
#include <random>

namespace mlearn {

/// Deterministic draws on top of std::mt19937_64. std::uniform_int_distribution
/// is implementation-defined, so seeded runs use these helpers instead.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    // rejection sampling, unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline int draw_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(n)));
}

inline bool draw_coin(std::mt19937_64& rng) {
    return (rng() & 1u) != 0;
}

/// Number of heads before the first tail with a fair coin.
inline int draw_geometric(std::mt19937_64& rng) {
    int n = 0;
    while (draw_coin(rng)) ++n;
    return n;
}

}  // namespace mlearn
