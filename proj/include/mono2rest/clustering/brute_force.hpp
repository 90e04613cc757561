// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/clustering/nsga3.hpp"
#include "mono2rest/clustering/objectives.hpp"
#include "mono2rest/clustering/pareto.hpp"
#include "mono2rest/error.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mono2rest::clustering {

/// Stirling number of the second kind: partitions of n items into k non-empty blocks.
inline std::uint64_t stirling2(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::uint64_t>> s(n + 1, std::vector<std::uint64_t>(k + 1, 0));
    s[0][0] = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= std::min(i, k); ++j) {
            s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    return s[n][k];
}

/// Visit every partition of n items into exactly k blocks once, as a
/// restricted growth string (first item in block 0, each new block id one
/// above the largest seen so far).
inline void for_each_partition(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit)
{
    if (k == 0 || n < k) {
        return;
    }
    std::vector<std::size_t> rgs(n, 0);
    std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t i, std::size_t blocks) {
        if (i == n) {
            if (blocks == k) {
                visit(rgs);
            }
            return;
        }
        // the remaining n - i items must still be able to open k - blocks new blocks
        if (blocks + (n - i) < k) {
            return;
        }
        const std::size_t limit = std::min(blocks + 1, k);
        for (std::size_t c = 0; c < limit; ++c) {
            rgs[i] = c;
            recurse(i + 1, c == blocks ? blocks + 1 : blocks);
        }
    };
    recurse(0, 0);
}

/// Exact Pareto set by exhaustive enumeration; for small test instances only.
inline std::vector<Individual> brute_force_pareto(const Evaluator& evaluator, std::size_t k, std::size_t max_n = 12)
{
    const std::size_t n = evaluator.size();
    if (n > max_n) {
        throw UsageError("exhaustive enumeration is limited to " + std::to_string(max_n) + " methods");
    }
    if (k == 0 || n < k) {
        throw InfeasibleK("cannot split " + std::to_string(n) + " methods into " + std::to_string(k) +
                          " non-empty clusters");
    }
    // incremental archive of non-dominated partitions in enumeration order
    std::vector<Individual> front;
    for_each_partition(n, k, [&](const std::vector<std::size_t>& rgs) {
        ClusteringSolution s{rgs, k};
        const auto o = evaluator.evaluate(s);
        const auto f = o.minimized();
        for (const auto& kept : front) {
            if (dominates(kept.objectives.minimized(), f)) {
                return;
            }
        }
        std::erase_if(front, [&](const Individual& kept) { return dominates(f, kept.objectives.minimized()); });
        front.push_back({std::move(s), o});
    });
    return front;
}

} // namespace mono2rest::clustering
