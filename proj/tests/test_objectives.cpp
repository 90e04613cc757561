// SPDX-License-Identifier: Apache-2.0
#include "mono2rest/clustering/objectives.hpp"
#include "support/instances.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

using namespace mono2rest;
using namespace mono2rest::clustering;

namespace {

CallGraph graph_with(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges)
{
    CallGraph g;
    g.nodes = mono2rest::testing::numbered_methods(std::vector<std::string>(n, "m"));
    std::sort(edges.begin(), edges.end());
    g.edges = std::move(edges);
    return g;
}

SimilarityMatrix uniform_sim(std::size_t n, double value)
{
    SimilarityMatrix sim{SquareMatrix<double>(n, value)};
    for (std::size_t i = 0; i < n; ++i) {
        sim.cells(i, i) = 1.0;
    }
    return sim;
}

// Independent recount of edge categories straight from the edge list.
ClusterMetrics naive_metrics(const std::vector<std::size_t>& members, const CallGraph& g)
{
    auto in = [&](std::size_t v) { return std::find(members.begin(), members.end(), v) != members.end(); };
    ClusterMetrics m;
    m.v_cluster = members.size();
    for (auto [a, b] : g.edges) {
        m.e_internal += in(a) && in(b);
        m.e_external += in(a) != in(b);
    }
    return m;
}

} // namespace

TEST(Coupling, FourMembersThreeInternalOneCrossing)
{
    auto g = graph_with(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    const std::vector<std::size_t> a{0, 1, 2, 3};
    EXPECT_EQ(coupling_of(a, g), 0.25);
    EXPECT_EQ(cohesion_of(a, g), 0.75);
}

TEST(Coupling, CrossingEdgeCountsInBothDirections)
{
    auto g = graph_with(2, {{0, 1}, {1, 0}});
    const std::vector<std::size_t> a{0};
    EXPECT_EQ(cluster_metrics(a, g).e_external, 2u);
    EXPECT_EQ(coupling_of(a, g), 1.0);
}

TEST(Coupling, IsolatedClusterIsZero)
{
    auto g = graph_with(3, {{0, 1}});
    const std::vector<std::size_t> c{2};
    EXPECT_EQ(coupling_of(c, g), 0.0);
}

TEST(Cohesion, CappedAtOne)
{
    auto g = graph_with(3, {{0, 1}, {1, 2}, {2, 0}, {0, 2}});
    const std::vector<std::size_t> all{0, 1, 2};
    EXPECT_EQ(cohesion_of(all, g), 1.0);
}

TEST(Cohesion, SingletonIsZero)
{
    auto g = graph_with(2, {{0, 1}});
    const std::vector<std::size_t> s{0};
    EXPECT_EQ(cohesion_of(s, g), 0.0);
}

TEST(SemSim, TwoMembersLiteral)
{
    auto sim = uniform_sim(2, 0.8);
    const std::vector<std::size_t> both{0, 1};
    EXPECT_DOUBLE_EQ(semsim_of(both, sim), 0.8);
}

TEST(SemSim, LiteralFormulaMayExceedOne)
{
    auto sim = uniform_sim(3, 1.0);
    const std::vector<std::size_t> all{0, 1, 2};
    EXPECT_EQ(semsim_of(all, sim), 2.0);
    EXPECT_EQ(semsim_of(all, sim, SemSimNormalization::ordered_pairs), 1.0);
}

TEST(SemSim, SingletonIsZero)
{
    auto sim = uniform_sim(3, 0.5);
    const std::vector<std::size_t> one{1};
    EXPECT_EQ(semsim_of(one, sim), 0.0);
}

TEST(Evaluator, SolutionTotalsMatchPerClusterFormulas)
{
    auto g = graph_with(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    auto sim = uniform_sim(5, 0.5);
    Evaluator ev(g, sim);
    ClusteringSolution s{{0, 0, 0, 0, 1}, 2};
    auto o = ev.evaluate(s);
    EXPECT_DOUBLE_EQ(o.coupling, 0.25 + 1.0);
    EXPECT_DOUBLE_EQ(o.cohesion, (0.75 + 0.0) / 2);
    EXPECT_DOUBLE_EQ(o.semsim, (12 * 0.5 / 4 + 0.0) / 2);
    EXPECT_EQ(o.minimized(), (Objectives{o.coupling, -o.cohesion, -o.semsim}));
    EXPECT_EQ(ObjectiveVector::from_minimized(o.minimized()), o);
}

TEST(Evaluator, RejectsMismatchedSimilarity)
{
    auto g = graph_with(3, {});
    auto sim = uniform_sim(2, 0.5);
    EXPECT_THROW(Evaluator(g, sim), DimensionMismatch);
}

TEST(Evaluator, MetricsMatchNaiveRecount)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto inst = mono2rest::testing::random_instance(9, 0.3, seed);
        Evaluator ev(inst.graph, inst.sim);
        Rng rng(seed);
        ClusteringSolution s{std::vector<std::size_t>(9), 3};
        for (auto& c : s.assignment) {
            c = uniform_index(rng, 3);
        }
        const auto metrics = ev.metrics(s);
        const auto members = s.clusters();
        for (std::size_t c = 0; c < 3; ++c) {
            const auto expected = naive_metrics(members[c], inst.graph);
            EXPECT_EQ(metrics[c].v_cluster, expected.v_cluster);
            EXPECT_EQ(metrics[c].e_internal, expected.e_internal);
            EXPECT_EQ(metrics[c].e_external, expected.e_external);
        }
    }
}

TEST(Evaluator, InvariantUnderRelabeling)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto inst = mono2rest::testing::random_instance(10, 0.3, seed);
        Evaluator ev(inst.graph, inst.sim);
        Rng rng(seed * 31);
        ClusteringSolution s{std::vector<std::size_t>(10), 4};
        for (auto& c : s.assignment) {
            c = uniform_index(rng, 4);
        }
        std::vector<std::size_t> perm(4);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        ClusteringSolution relabeled = s;
        for (auto& c : relabeled.assignment) {
            c = perm[c];
        }
        EXPECT_EQ(ev.evaluate(s), ev.evaluate(relabeled));
    }
}

TEST(Evaluator, AddingInternalEdgeNeverHurtsThatCluster)
{
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = mono2rest::testing::random_instance(8, 0.25, 100 + static_cast<std::uint64_t>(trial));
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < 8; ++i) {
            if (bernoulli(rng, 0.5)) {
                members.push_back(i);
            }
        }
        if (members.size() < 2) {
            continue;
        }
        const auto before = cluster_metrics(members, inst.graph);
        auto g = inst.graph;
        const auto a = members[uniform_index(rng, members.size())];
        auto b = members[uniform_index(rng, members.size())];
        if (a == b) {
            continue;
        }
        if (std::find(g.edges.begin(), g.edges.end(), std::pair{a, b}) != g.edges.end()) {
            continue;
        }
        g.edges.emplace_back(a, b);
        const auto after = cluster_metrics(members, g);
        EXPECT_LE(coupling_of(after), coupling_of(before));
        EXPECT_GE(static_cast<double>(after.e_internal) / static_cast<double>(after.v_cluster),
                  static_cast<double>(before.e_internal) / static_cast<double>(before.v_cluster));
    }
}

TEST(ClusteringSolution, ValidityAndClusters)
{
    EXPECT_TRUE((ClusteringSolution{{0, 1, 1}, 2}.valid()));
    EXPECT_FALSE((ClusteringSolution{{0, 0, 0}, 2}.valid()));
    EXPECT_FALSE((ClusteringSolution{{0, 2}, 2}.valid()));
    EXPECT_FALSE((ClusteringSolution{{}, 0}.valid()));
    auto members = ClusteringSolution{{1, 0, 1}, 2}.clusters();
    EXPECT_EQ(members[0], std::vector<std::size_t>{1});
    EXPECT_EQ(members[1], (std::vector<std::size_t>{0, 2}));
}
