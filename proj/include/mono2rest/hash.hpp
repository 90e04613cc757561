// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace mono2rest {

inline constexpr std::uint64_t fnv1a_offset = 0xcbf29ce484222325ULL;

/// 64-bit FNV-1a. The seed is folded into the offset basis.
inline constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0)
{
    std::uint64_t h = fnv1a_offset ^ seed;
    for (char c : data) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

} // namespace mono2rest
