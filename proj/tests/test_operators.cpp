// SPDX-License-Identifier: Apache-2.0
#include "mono2rest/clustering/operators.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <vector>

using namespace mono2rest;
using namespace mono2rest::clustering;
using Labels = std::vector<std::size_t>;

TEST(InitPopulation, AsManyClustersAsMethodsGivesSingletons)
{
    Rng rng(1);
    for (const auto& s : init_population(5, 5, 20, rng)) {
        EXPECT_EQ(canonical_labels(s.assignment).size(), 5u);
        Labels sorted = s.assignment;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(sorted, (Labels{0, 1, 2, 3, 4}));
    }
}

TEST(InitPopulation, SingleClusterIsAllZero)
{
    Rng rng(2);
    for (const auto& s : init_population(6, 1, 10, rng)) {
        EXPECT_EQ(s.assignment, Labels(6, 0));
    }
}

TEST(InitPopulation, SizeValidityAndDeterminism)
{
    Rng a(3);
    Rng b(3);
    auto pa = init_population(12, 4, 30, a);
    auto pb = init_population(12, 4, 30, b);
    ASSERT_EQ(pa.size(), 30u);
    EXPECT_EQ(pa, pb);
    for (const auto& s : pa) {
        EXPECT_TRUE(s.valid());
        EXPECT_EQ(s.k, 4u);
    }
}

TEST(InitPopulation, TooFewMethodsIsInfeasible)
{
    Rng rng(4);
    EXPECT_THROW(init_population(2, 3, 4, rng), InfeasibleK);
    EXPECT_THROW(init_population(2, 0, 4, rng), InfeasibleK);
}

TEST(Crossover, InjectionExample)
{
    ClusteringSolution p1{{0, 0, 1, 1}, 2};
    ClusteringSolution p2{{0, 1, 0, 1}, 2};
    EXPECT_EQ(inject_cluster(p1, p2, 0, 0), (Labels{0, 0, 0, 1}));
}

TEST(Crossover, IdenticalParentsWithMatchingIdsAreUnchanged)
{
    // Injection onto the source's own id is a no-op. Any other target merges
    // two clusters, and repair then reseeds the emptied id.
    ClusteringSolution p{{0, 1, 2, 0, 1, 2}, 3};
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(inject_cluster(p, p, c, c), p.assignment);
    }
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        auto child = crossover(p, p, rng);
        EXPECT_TRUE(child.valid());
    }
}

TEST(Crossover, ChildAlwaysValid)
{
    Rng rng(6);
    auto pop = init_population(10, 4, 40, rng);
    for (std::size_t i = 0; i + 1 < pop.size(); ++i) {
        auto child = crossover(pop[i], pop[i + 1], rng);
        EXPECT_TRUE(child.valid());
        EXPECT_EQ(child.size(), 10u);
    }
}

TEST(Mutate, SingleClusterIsNoOp)
{
    Rng rng(7);
    ClusteringSolution s{Labels(5, 0), 1};
    mutate(s, rng);
    EXPECT_EQ(s.assignment, Labels(5, 0));
}

TEST(Mutate, TwoSingletonsIsNoOp)
{
    Rng rng(8);
    ClusteringSolution s{{0, 1}, 2};
    for (int i = 0; i < 20; ++i) {
        mutate(s, rng);
        EXPECT_EQ(s.assignment, (Labels{0, 1}));
    }
}

TEST(Mutate, MovesExactlyOneMethodAndStaysValid)
{
    Rng rng(9);
    auto pop = init_population(9, 3, 60, rng);
    for (auto& s : pop) {
        const auto before = s.assignment;
        mutate(s, rng);
        EXPECT_TRUE(s.valid());
        std::size_t moved = 0;
        for (std::size_t i = 0; i < before.size(); ++i) {
            moved += before[i] != s.assignment[i];
        }
        EXPECT_LE(moved, 1u);
    }
}

TEST(Repair, FillsEveryEmptyCluster)
{
    Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + uniform_index(rng, 5);
        const std::size_t n = k + uniform_index(rng, 6);
        Labels a(n);
        for (auto& c : a) {
            c = uniform_index(rng, std::max<std::size_t>(1, k / 2));
        }
        repair(a, k, rng);
        EXPECT_TRUE((ClusteringSolution{a, k}.valid()));
    }
}

TEST(Repair, TakesFromLargestCluster)
{
    Rng rng(11);
    Labels a{0, 0, 0, 1};
    repair(a, 3, rng);
    EXPECT_EQ(std::count(a.begin(), a.end(), 0), 2);
    EXPECT_EQ(a[3], 1u);
    EXPECT_EQ(std::count(a.begin(), a.end(), 2), 1);
}

TEST(CanonicalLabels, FirstAppearanceOrder)
{
    EXPECT_EQ(canonical_labels(Labels{2, 2, 0, 1, 0}), (Labels{0, 0, 1, 2, 1}));
    EXPECT_EQ(canonical_labels(Labels{1, 0}), canonical_labels(Labels{0, 1}));
}
