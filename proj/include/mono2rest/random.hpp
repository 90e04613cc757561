// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mono2rest {

// std::mt19937_64 is fully specified by the standard; the distributions are
// not, so sampling helpers below are written out to keep seeded runs identical
// across standard library implementations.
using Rng = std::mt19937_64;

/// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    // 2^64 mod bound; draws below it would bias the low residues.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t draw = rng();
    while (draw < threshold) {
        draw = rng();
    }
    return static_cast<std::size_t>(draw % bound);
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p)
{
    return uniform_real(rng) < p;
}

} // namespace mono2rest
