#pragma once

// splitmix64 mixing and the small deterministic RNG used everywhere.
// All randomness in the project flows through these two primitives so that
// results are bit-exact across platforms and thread counts.

#include <cmath>
#include <cstdint>

namespace orwalk {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer applied to z + golden increment.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += kGolden64;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Zig-zag encoding of signed coordinates: n >= 0 -> 2n, n < 0 -> -2n-1.
constexpr std::uint64_t zigzag64(std::int64_t n) noexcept {
    return (static_cast<std::uint64_t>(n) << 1) ^ static_cast<std::uint64_t>(n >> 63);
}

// Sequential splitmix64 stream.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        const std::uint64_t z = mix64(state_);
        state_ += kGolden64;
        return z;
    }

    // Uniform double in [0, 1), 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Exponential holding time with the given rate.
    double exponential(double rate) noexcept { return -std::log1p(-uniform01()) / rate; }

    // Uniform integer in [0, n) by 64x32 multiplicative range mapping.
    std::uint32_t below(std::uint32_t n) noexcept {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Fair coin as +1 / -1.
    int sign_flip() noexcept { return (next() >> 63) ? -1 : +1; }

private:
    std::uint64_t state_;
};

}  // namespace orwalk
