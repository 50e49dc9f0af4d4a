#pragma once
// Counter-based deterministic sampling: draw k is a pure function of (seed, k),
// so results are reproducible regardless of evaluation order or thread count.

#include <cmath>
#include <cstdint>

#include "../core.hpp"

namespace tlres::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Uniform in (0, 1]: never 0, so it is safe inside log().
inline double uniform_from_bits(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1ull) * 0x1.0p-53;
}

// Standard normal draw number `index` for a given seed (Box-Muller, first leg).
inline double gaussian_sample(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t base = seed ^ (index * 0x9E3779B97F4A7C15ull);
    const std::uint64_t b1 = splitmix64(base);
    const std::uint64_t b2 = splitmix64(b1);
    const double u1 = uniform_from_bits(b1);
    const double u2 = uniform_from_bits(b2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

} // namespace tlres::detail
