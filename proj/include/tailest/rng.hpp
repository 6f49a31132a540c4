#pragma once

// Counter-mode splitmix64 ("tailest.sm64ctr/1"): draw j of a stream seeded s
// is mix64(s + (j+1) * kGamma64), which is exactly the canonical splitmix64
// output sequence for seed s. Because each draw is a pure function of
// (seed, index), streams can be evaluated in any order or in parallel and
// still produce identical values, and replicate streams derived as
// base_seed XOR mix64(replicate) are decorrelated affine counter lines.
//
// Uniform doubles are bit midpoints ((x >> 12) + 0.5) * 2^-52: 52 random
// bits centred in their cell, hence always strictly inside (0, 1) -- safe to
// feed straight into inverse survival functions that blow up at 0 or 1.

#include <cstdint>

namespace tailest::rng {

inline constexpr char kId[] = "tailest.sm64ctr/1";
inline constexpr std::uint64_t kGamma64 = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Seed of the r-th replicate stream (r 0-based). XOR with the mixed index
// keeps replicate 0 equal to the base seed while scattering all others.
constexpr std::uint64_t replicate_seed(std::uint64_t base_seed,
                                       std::uint64_t replicate) noexcept {
    return base_seed ^ mix64(replicate);
}

constexpr double to_open01(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t next_bits() noexcept {
        return mix64(seed_ + (++counter_) * kGamma64);
    }

    // Uniform on the open interval (0, 1).
    constexpr double next_open01() noexcept { return to_open01(next_bits()); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace tailest::rng
