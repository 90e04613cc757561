// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/clustering/objectives.hpp"
#include "mono2rest/error.hpp"
#include "mono2rest/random.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace mono2rest::clustering {

/// Relabel clusters in order of first appearance. Two assignments describe
/// the same partition iff their canonical forms are equal.
inline std::vector<std::size_t> canonical_labels(std::span<const std::size_t> assignment)
{
    std::vector<std::size_t> out(assignment.size());
    std::vector<std::size_t> remap;
    std::size_t next = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const auto c = assignment[i];
        if (c >= remap.size()) {
            remap.resize(c + 1, SIZE_MAX);
        }
        if (remap[c] == SIZE_MAX) {
            remap[c] = next++;
        }
        out[i] = remap[c];
    }
    return out;
}

/// Fill empty cluster ids: while one exists, move a random member out of the
/// lowest-numbered largest cluster into it. Needs n >= k.
inline void repair(std::vector<std::size_t>& assignment, std::size_t k, Rng& rng)
{
    std::vector<std::size_t> counts(k, 0);
    for (auto c : assignment) {
        ++counts[c];
    }
    for (std::size_t empty = 0; empty < k; ++empty) {
        if (counts[empty] > 0) {
            continue;
        }
        const auto largest = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        if (counts[largest] < 2) {
            return; // n < k, nothing can be moved
        }
        const auto pick = uniform_index(rng, counts[largest]);
        std::size_t seen = 0;
        for (auto& c : assignment) {
            if (c == largest && seen++ == pick) {
                c = empty;
                break;
            }
        }
        --counts[largest];
        ++counts[empty];
    }
}

/// One random method seeds each cluster, the rest are spread uniformly.
inline std::vector<ClusteringSolution> init_population(std::size_t n, std::size_t k, std::size_t population_size,
                                                       Rng& rng)
{
    if (k == 0 || n < k) {
        throw InfeasibleK("cannot split " + std::to_string(n) + " methods into " + std::to_string(k) +
                          " non-empty clusters");
    }
    std::vector<ClusteringSolution> population;
    population.reserve(population_size);
    std::vector<std::size_t> order(n);
    for (std::size_t p = 0; p < population_size; ++p) {
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[uniform_index(rng, i)]);
        }
        ClusteringSolution s{std::vector<std::size_t>(n, 0), k};
        for (std::size_t i = 0; i < n; ++i) {
            s.assignment[order[i]] = i < k ? i : uniform_index(rng, k);
        }
        population.push_back(std::move(s));
    }
    return population;
}

/// Injection without repair: start from `receiver`, move every member of
/// `donor`'s cluster `source` into cluster `target`.
inline std::vector<std::size_t> inject_cluster(const ClusteringSolution& donor, const ClusteringSolution& receiver,
                                               std::size_t source, std::size_t target)
{
    auto child = receiver.assignment;
    for (std::size_t i = 0; i < donor.size(); ++i) {
        if (donor.assignment[i] == source) {
            child[i] = target;
        }
    }
    return child;
}

/// Inject a random cluster of `p1` into a copy of `p2` under a random id,
/// then repair so that all k clusters are populated.
inline ClusteringSolution crossover(const ClusteringSolution& p1, const ClusteringSolution& p2, Rng& rng)
{
    const auto source = uniform_index(rng, p1.k);
    const auto target = uniform_index(rng, p2.k);
    ClusteringSolution child{inject_cluster(p1, p2, source, target), p2.k};
    repair(child.assignment, child.k, rng);
    return child;
}

/// Move one random method to a different random cluster. A draw that would
/// empty its cluster is resampled; after `max_tries` failures nothing moves.
inline void mutate(ClusteringSolution& s, Rng& rng, std::size_t max_tries = 32)
{
    if (s.k < 2 || s.size() == 0) {
        return;
    }
    std::vector<std::size_t> counts(s.k, 0);
    for (auto c : s.assignment) {
        ++counts[c];
    }
    for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
        const auto m = uniform_index(rng, s.size());
        const auto from = s.assignment[m];
        if (counts[from] < 2) {
            continue;
        }
        auto to = uniform_index(rng, s.k - 1);
        if (to >= from) {
            ++to;
        }
        s.assignment[m] = to;
        return;
    }
}

} // namespace mono2rest::clustering
