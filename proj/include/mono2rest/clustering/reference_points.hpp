// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mono2rest::clustering {

/// Das-Dennis simplex lattice: every point whose m coordinates are multiples
/// of 1/divisions and sum to one. There are C(m + divisions - 1, divisions).
inline std::vector<std::vector<double>> reference_points(std::size_t m, std::size_t divisions)
{
    std::vector<std::vector<double>> out;
    if (m == 0) {
        return out;
    }
    if (divisions == 0) {
        // degenerate lattice: the centroid only
        out.emplace_back(m, 1.0 / static_cast<double>(m));
        return out;
    }
    std::vector<std::size_t> counts(m, 0);
    std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t axis, std::size_t left) {
        if (axis + 1 == m) {
            counts[axis] = left;
            std::vector<double> point(m);
            for (std::size_t i = 0; i < m; ++i) {
                point[i] = static_cast<double>(counts[i]) / static_cast<double>(divisions);
            }
            out.push_back(std::move(point));
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            counts[axis] = c;
            recurse(axis + 1, left - c);
        }
    };
    recurse(0, divisions);
    return out;
}

} // namespace mono2rest::clustering
