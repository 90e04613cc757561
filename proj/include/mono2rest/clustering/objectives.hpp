// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/semantics.hpp"

#include <algorithm>
#include <array>
#include <span>
#include <vector>

namespace mono2rest::clustering {

/// Assignment of each of n methods to one of k clusters.
struct ClusteringSolution {
    std::vector<std::size_t> assignment;
    std::size_t k = 0;

    std::size_t size() const noexcept { return assignment.size(); }

    /// Every id is below k and every cluster has at least one member.
    bool valid() const
    {
        if (k == 0) {
            return false;
        }
        std::vector<std::size_t> counts(k, 0);
        for (auto c : assignment) {
            if (c >= k) {
                return false;
            }
            ++counts[c];
        }
        return std::all_of(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; });
    }

    std::vector<std::vector<std::size_t>> clusters() const
    {
        std::vector<std::vector<std::size_t>> out(k);
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            out[assignment[i]].push_back(i);
        }
        return out;
    }

    friend bool operator==(const ClusteringSolution&, const ClusteringSolution&) = default;
};

struct ClusterMetrics {
    std::size_t v_cluster = 0;
    std::size_t e_internal = 0;
    std::size_t e_external = 0; // crossing edges in either direction
};

/// Objectives in their natural sense: coupling is minimized, cohesion and
/// semantic similarity are maximized.
struct ObjectiveVector {
    double coupling = 0.0;
    double cohesion = 0.0;
    double semsim = 0.0;

    /// The form the optimizer minimizes: (coupling, -cohesion, -semsim).
    std::array<double, 3> minimized() const { return {coupling, -cohesion, -semsim}; }

    static ObjectiveVector from_minimized(const std::array<double, 3>& f) { return {f[0], -f[1], -f[2]}; }

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

using Objectives = std::array<double, 3>;

/// How a cluster's summed pairwise similarity is scaled. `literal` divides by
/// the member count (values may exceed 1); `ordered_pairs` divides by the
/// number of ordered pairs and stays within [-1, 1].
enum class SemSimNormalization { literal, ordered_pairs };

inline const char* to_string(SemSimNormalization n)
{
    return n == SemSimNormalization::literal ? "literal" : "ordered_pairs";
}

/// Metrics of an arbitrary member set.
inline ClusterMetrics cluster_metrics(std::span<const std::size_t> members, const CallGraph& graph)
{
    std::vector<bool> inside(graph.size(), false);
    for (auto m : members) {
        inside[m] = true;
    }
    ClusterMetrics out;
    out.v_cluster = members.size();
    for (auto [from, to] : graph.edges) {
        if (inside[from] && inside[to]) {
            ++out.e_internal;
        } else if (inside[from] || inside[to]) {
            ++out.e_external;
        }
    }
    return out;
}

inline double coupling_of(const ClusterMetrics& m)
{
    const auto total = m.e_internal + m.e_external;
    return total == 0 ? 0.0 : static_cast<double>(m.e_external) / static_cast<double>(total);
}

inline double cohesion_of(const ClusterMetrics& m)
{
    if (m.v_cluster == 0) {
        return 0.0;
    }
    return std::min(1.0, static_cast<double>(m.e_internal) / static_cast<double>(m.v_cluster));
}

inline double coupling_of(std::span<const std::size_t> members, const CallGraph& graph)
{
    return coupling_of(cluster_metrics(members, graph));
}

inline double cohesion_of(std::span<const std::size_t> members, const CallGraph& graph)
{
    return cohesion_of(cluster_metrics(members, graph));
}

/// Sum of Sim(i, j) over ordered pairs of distinct members, scaled per
/// `norm`. A singleton has an empty sum and scores 0.
inline double semsim_of(std::span<const std::size_t> members, const SimilarityMatrix& sim,
                        SemSimNormalization norm = SemSimNormalization::literal)
{
    const std::size_t v = members.size();
    if (v < 2) {
        return 0.0;
    }
    double sum = 0.0;
    for (auto i : members) {
        for (auto j : members) {
            if (i != j) {
                sum += sim(i, j);
            }
        }
    }
    const double denom = norm == SemSimNormalization::literal ? static_cast<double>(v) : static_cast<double>(v * (v - 1));
    return sum / denom;
}

/// Scores whole solutions against a fixed graph and similarity matrix.
///
/// Clusters are visited in order of their first member, so any relabeling of
/// the same partition yields bit-identical objective values.
class Evaluator {
public:
    Evaluator(const CallGraph& graph, const SimilarityMatrix& sim,
              SemSimNormalization norm = SemSimNormalization::literal)
        : graph_(&graph), sim_(&sim), norm_(norm)
    {
        if (sim.size() != graph.size()) {
            throw DimensionMismatch("similarity matrix has " + std::to_string(sim.size()) + " rows but the graph has " +
                                    std::to_string(graph.size()) + " nodes");
        }
    }

    std::size_t size() const noexcept { return graph_->size(); }
    SemSimNormalization normalization() const noexcept { return norm_; }
    const CallGraph& graph() const noexcept { return *graph_; }
    const SimilarityMatrix& similarity() const noexcept { return *sim_; }

    std::vector<ClusterMetrics> metrics(const ClusteringSolution& s) const
    {
        std::vector<ClusterMetrics> out(s.k);
        for (auto c : s.assignment) {
            ++out[c].v_cluster;
        }
        for (auto [from, to] : graph_->edges) {
            const auto a = s.assignment[from];
            const auto b = s.assignment[to];
            if (a == b) {
                ++out[a].e_internal;
            } else {
                ++out[a].e_external;
                ++out[b].e_external;
            }
        }
        return out;
    }

    ObjectiveVector evaluate(const ClusteringSolution& s) const
    {
        const auto per_cluster = metrics(s);
        const auto members = s.clusters();

        std::vector<std::size_t> order;
        std::vector<bool> seen(s.k, false);
        for (auto c : s.assignment) {
            if (!seen[c]) {
                seen[c] = true;
                order.push_back(c);
            }
        }

        ObjectiveVector out;
        for (auto c : order) {
            out.coupling += coupling_of(per_cluster[c]);
            out.cohesion += cohesion_of(per_cluster[c]);
            out.semsim += semsim_of(members[c], *sim_, norm_);
        }
        if (!order.empty()) {
            out.cohesion /= static_cast<double>(order.size());
            out.semsim /= static_cast<double>(order.size());
        }
        return out;
    }

private:
    const CallGraph* graph_;
    const SimilarityMatrix* sim_;
    SemSimNormalization norm_;
};

} // namespace mono2rest::clustering
