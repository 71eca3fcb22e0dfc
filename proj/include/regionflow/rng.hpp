#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace regionflow::rng {

/// SplitMix64 finalizer; derives independent sub-seeds from one master seed.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform integer in [0, n) by rejection; identical on every standard library,
/// unlike std::uniform_int_distribution.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = gen();
    } while (v >= limit);
    return v % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, std::mt19937_64& gen) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = uniform_index(gen, i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace regionflow::rng
