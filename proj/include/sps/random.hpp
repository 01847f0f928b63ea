#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "sps/common.hpp"

namespace sps {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Hash an ordered tuple of integers into one 64-bit value. Used for
/// counter-based coins: a coin is a pure function of its coordinates, so
/// results never depend on iteration order or thread count.
inline std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double coin(std::initializer_list<std::uint64_t> words) {
    return to_unit(hash_words(words));
}

/// Derive an independent child seed for a labelled sub-computation.
inline Seed derive_seed(Seed seed, std::uint64_t label, std::uint64_t index = 0) {
    return hash_words({seed, label, index});
}

/// Small sequential generator (SplitMix64 stream). Distributions are
/// implemented here rather than through <random> so that sequences are
/// identical across standard library implementations.
class Rng {
public:
    explicit Rng(Seed seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return to_unit(next()); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per call).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace sps
