#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "persist/graph.hpp"

using namespace persist;

namespace {

Digraph chain(std::size_t n) {
    std::vector<Arc> arcs;
    for (NodeId i = 0; i + 1 < n; ++i) arcs.push_back({i, i + 1});
    return Digraph(n, arcs);
}

Digraph cycle(std::size_t n) {
    std::vector<Arc> arcs;
    for (NodeId i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n});
    return Digraph(n, arcs);
}

}  // namespace

TEST(Reachable, ChainFromStartReachesAll) {
    EXPECT_EQ(reachable_set(chain(4), 0), (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(Reachable, ChainFromEndReachesOnlyItself) { EXPECT_EQ(reachable_set(chain(4), 3), (std::vector<NodeId>{3})); }

TEST(Reachable, IsolatedNode) {
    Digraph g(3, {{0, 1}});
    EXPECT_EQ(reachable_set(g, 2), (std::vector<NodeId>{2}));
}

TEST(Reachable, RejectsUnknownNode) { EXPECT_THROW(reachable_set(chain(3), 7), InvalidNode); }

TEST(Centers, OutStarHasSingleCenter) {
    Digraph g(4, {{0, 1}, {0, 2}, {0, 3}});
    EXPECT_EQ(centers(g), (std::vector<NodeId>{0}));
    EXPECT_TRUE(is_quasi_strongly_connected(g));
    EXPECT_FALSE(is_strongly_connected(g));
}

TEST(Centers, TwoDisjointPairsHaveNone) {
    Digraph g(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    EXPECT_TRUE(centers(g).empty());
    EXPECT_FALSE(is_quasi_strongly_connected(g));
}

TEST(Centers, EveryNodeOfACycle) {
    EXPECT_EQ(centers(cycle(5)).size(), 5u);
    EXPECT_TRUE(is_strongly_connected(cycle(5)));
}

TEST(Centers, SingleNodeIsItsOwnCenter) {
    Digraph g(1);
    EXPECT_EQ(centers(g), (std::vector<NodeId>{0}));
    EXPECT_EQ(diameter(g), 0u);
}

TEST(Diameter, Chain) { EXPECT_EQ(diameter(chain(5)), 4u); }

TEST(Diameter, OutStar) { EXPECT_EQ(diameter(Digraph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})), 1u); }

TEST(Diameter, Cycle) { EXPECT_EQ(diameter(cycle(6)), 5u); }

TEST(Diameter, ArclessGraph) { EXPECT_EQ(diameter(Digraph(4)), 0u); }

TEST(Digraph, CollapsesDuplicateArcs) {
    Digraph g(2, {{0, 1}, {0, 1}});
    EXPECT_EQ(g.arcs().size(), 1u);
}

TEST(Digraph, RejectsSelfLoop) { EXPECT_THROW(Digraph(2, {{1, 1}}), DomainError); }

TEST(Digraph, RejectsOutOfRangeArc) { EXPECT_THROW(Digraph(3, {{0, 5}}), InvalidNode); }

TEST(Digraph, RejectsEmptyGraph) { EXPECT_THROW(Digraph(0), DomainError); }

TEST(Ancestors, ReverseOfChain) {
    EXPECT_EQ(ancestors(chain(4), 2), (std::vector<NodeId>{0, 1, 2}));
}

// Every query against Floyd-Warshall on random graphs with up to 8 nodes.
TEST(GraphOracle, RandomGraphsAgreeWithAllPairs) {
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        const double p = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
        auto arcs = oracle::random_arcs(rng, n, p);
        Digraph g(n, arcs);
        auto ap = oracle::all_pairs(n, arcs);
        for (NodeId i = 0; i < n; ++i) {
            ASSERT_EQ(reachable_set(g, i), oracle::reachable(ap, i)) << "trial " << trial << " node " << i;
            auto dist = distances_from(g, i);
            for (NodeId j = 0; j < n; ++j) {
                if (ap.dist[i][j] == oracle::kUnreachable) ASSERT_FALSE(dist[j]);
                else ASSERT_EQ(*dist[j], ap.dist[i][j]);
            }
        }
        ASSERT_EQ(centers(g), oracle::centers(ap)) << "trial " << trial;
        ASSERT_EQ(diameter(g), oracle::diameter(ap)) << "trial " << trial;
        bool strong = true;
        for (NodeId i = 0; i < n; ++i) strong = strong && oracle::reachable(ap, i).size() == n;
        ASSERT_EQ(is_strongly_connected(g), strong) << "trial " << trial;
    }
}

// Adding arcs never shrinks a reachable set.
TEST(GraphOracle, ReachabilityMonotoneUnderArcAddition) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
        auto arcs = oracle::random_arcs(rng, n, 0.25);
        Digraph before(n, arcs);
        auto more = arcs;
        for (const auto& a : oracle::random_arcs(rng, n, 0.15)) more.push_back(a);
        Digraph after(n, more);
        for (NodeId i = 0; i < n; ++i) {
            auto r0 = reachable_set(before, i), r1 = reachable_set(after, i);
            ASSERT_TRUE(std::includes(r1.begin(), r1.end(), r0.begin(), r0.end()));
        }
        ASSERT_LE(centers(before).size(), centers(after).size());
    }
}
