#include <gtest/gtest.h>

#include <ncpkit/generators.hpp>
#include <ncpkit/graph.hpp>

#include "support.hpp"

using namespace ncpkit;

namespace {

Graph two_triangles() {
    return build_graph({{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
}

}  // namespace

TEST(BuildGraph, PathCountsStrengthsAndVolume) {
    const auto g = build_graph({{0, 1, 1}, {1, 2, 1}});
    EXPECT_EQ(g.num_nodes(), 3u);
    EXPECT_EQ(g.num_edges(), 2u);
    EXPECT_DOUBLE_EQ(g.strength(0), 1.0);
    EXPECT_DOUBLE_EQ(g.strength(1), 2.0);
    EXPECT_DOUBLE_EQ(g.strength(2), 1.0);
    EXPECT_DOUBLE_EQ(g.total_volume(), 4.0);
}

TEST(BuildGraph, DuplicateEdgesSumTheirWeights) {
    const auto g = build_graph({{0, 1, 2}, {1, 0, 3}});
    EXPECT_EQ(g.num_edges(), 1u);
    EXPECT_DOUBLE_EQ(g.weight(0, 1), 5.0);
    EXPECT_DOUBLE_EQ(g.weight(1, 0), 5.0);
}

TEST(BuildGraph, CompleteGraphOnFourNodes) {
    const auto g = fixtures::complete_graph(4);
    EXPECT_EQ(g.num_nodes(), 4u);
    EXPECT_EQ(g.num_edges(), 6u);
    for (NodeId v = 0; v < 4; ++v) {
        EXPECT_DOUBLE_EQ(g.strength(v), 3.0);
    }
    EXPECT_DOUBLE_EQ(g.total_volume(), 12.0);
}

TEST(BuildGraph, RejectsBadInput) {
    EXPECT_THROW(build_graph({{0, 1, 0.0}}), GraphError);
    EXPECT_THROW(build_graph({{0, 1, -1.0}}), GraphError);
    EXPECT_THROW(build_graph({{2, 2, 1.0}}), GraphError);
    EXPECT_THROW(build_graph(std::span<const WeightedEdge<std::int64_t>>{}), GraphError);
    try {
        build_graph({{0, 1, 1.0}, {4, 7, -2.0}});
        FAIL() << "expected rejection";
    } catch (const GraphError& e) {
        EXPECT_NE(std::string(e.what()).find("(4, 7)"), std::string::npos);
    }
}

TEST(BuildGraph, StringLabelsFollowFirstAppearance) {
    const std::vector<WeightedEdge<std::string>> edges{{"carol", "alice", 1}, {"alice", "bob", 2}};
    const auto g = build_graph(std::span<const WeightedEdge<std::string>>(edges));
    EXPECT_EQ(g.label(0), "carol");
    EXPECT_EQ(g.label(1), "alice");
    EXPECT_EQ(g.label(2), "bob");
    EXPECT_EQ(g.find_label("bob"), NodeId{2});
    EXPECT_FALSE(g.find_label("dave").has_value());
}

TEST(BuildGraph, SparseIntegerIdsAreCompacted) {
    const auto g = build_graph({{10, 30, 1}, {30, 20, 1}});
    EXPECT_EQ(g.num_nodes(), 3u);
    EXPECT_EQ(g.label(0), "10");
    EXPECT_EQ(g.label(2), "30");
    EXPECT_DOUBLE_EQ(g.weight(1, 2), 1.0);
}

TEST(BuildGraph, SymmetricSortedAdjacency) {
    Rng rng(5);
    const auto g = fixtures::random_graph(40, 0.2, rng, true);
    double twice = 0.0;
    for (const auto& e : g.edge_list()) {
        twice += 2.0 * e.w;
    }
    EXPECT_NEAR(g.total_volume(), twice, 1e-9);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
        const auto nb = g.neighbors(u);
        EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
        double s = 0.0;
        for (std::size_t k = 0; k < nb.size(); ++k) {
            EXPECT_NE(nb[k], u);
            EXPECT_EQ(g.weight(nb[k], u), g.weights(u)[k]);
            s += g.weights(u)[k];
        }
        EXPECT_EQ(s, g.strength(u));
    }
}

TEST(Volume, CompleteGraphBlocks) {
    const auto g = fixtures::complete_graph(4);
    EXPECT_DOUBLE_EQ(volume(g, NodeSet{0, 1}, NodeSet{2, 3}), 4.0);
    EXPECT_DOUBLE_EQ(volume(g, NodeSet{0, 1}, NodeSet::range(4)), 6.0);
    EXPECT_DOUBLE_EQ(volume(g, NodeSet{0, 1}), 6.0);
}

TEST(Volume, PathSingleEdge) {
    const auto g = fixtures::path_graph(3);
    EXPECT_DOUBLE_EQ(volume(g, NodeSet{0}, NodeSet{1}), 1.0);
    EXPECT_THROW(volume(g, NodeSet{0}, NodeSet{3}), GraphError);
}

TEST(Volume, ComplementAndSymmetry) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = fixtures::random_graph(15, 0.3, rng, true);
        std::vector<NodeId> pick;
        for (NodeId v = 0; v < 15; ++v) {
            if (uniform_below(rng, 2) == 1) {
                pick.push_back(v);
            }
        }
        const NodeSet s(pick);
        const auto sc = s.complement(15);
        const auto all = NodeSet::range(15);
        EXPECT_NEAR(volume(g, s, all) + volume(g, sc, all), g.total_volume(), 1e-9);
        EXPECT_NEAR(volume(g, s, sc), volume(g, sc, s), 1e-12);
        EXPECT_NEAR(cut(g, s), volume(g, s, sc), 1e-9);
    }
}

TEST(Geodesics, UnitPath) {
    const auto d = geodesic_distances(fixtures::path_graph(3), 0, LengthMode::unit);
    EXPECT_EQ(d, (std::vector<double>{0, 1, 2}));
}

TEST(Geodesics, InverseWeightSingleEdge) {
    const auto g = build_graph({{0, 1, 2}});
    const auto d = geodesic_distances(g, 0, LengthMode::inverse_weight);
    EXPECT_DOUBLE_EQ(d[0], 0.0);
    EXPECT_DOUBLE_EQ(d[1], 0.5);
}

TEST(Geodesics, OtherComponentIsUnreachable) {
    const auto d = geodesic_distances(two_triangles(), 0, LengthMode::unit);
    for (NodeId v = 3; v < 6; ++v) {
        EXPECT_EQ(d[v], kInfinity);
    }
}

TEST(Geodesics, InverseWeightPrefersHeavyDetour) {
    // direct edge of length 1 against two edges of length 0.25
    const auto g = build_graph({{0, 2, 1}, {0, 1, 4}, {1, 2, 4}});
    EXPECT_DOUBLE_EQ(geodesic_distances(g, 0)[2], 0.5);
    EXPECT_DOUBLE_EQ(geodesic_distances(g, 0, LengthMode::unit)[2], 1.0);
}

TEST(Geodesics, TriangleInequality) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = fixtures::random_connected_graph(20, 0.15, rng, true);
        std::vector<std::vector<double>> d;
        for (NodeId s = 0; s < 20; ++s) {
            d.push_back(geodesic_distances(g, s));
        }
        for (NodeId a = 0; a < 20; ++a) {
            for (NodeId b = 0; b < 20; ++b) {
                EXPECT_NEAR(d[a][b], d[b][a], 1e-12);
                for (NodeId c = 0; c < 20; ++c) {
                    EXPECT_LE(d[a][c], d[a][b] + d[b][c] + 1e-12);
                }
            }
        }
    }
}

TEST(KNeighborhood, PathRadiusOne) {
    EXPECT_EQ(k_neighborhood(fixtures::path_graph(5), NodeSet{2}, 1, LengthMode::unit), (NodeSet{1, 2, 3}));
}

TEST(KNeighborhood, RadiusZeroIsTheSeeds) {
    Rng rng(8);
    const auto g = fixtures::random_connected_graph(12, 0.3, rng, true);
    EXPECT_EQ(k_neighborhood(g, NodeSet{3, 7}, 0), (NodeSet{3, 7}));
}

TEST(KNeighborhood, CavemanInteriorNodeSeesItsClique) {
    const auto g = connected_caveman(3, 4);
    // node 2 is neither the rewired first node nor the last node of clique 0
    EXPECT_EQ(k_neighborhood(g, NodeSet{2}, 1, LengthMode::unit), (NodeSet{0, 1, 2, 3}));
}

TEST(KNeighborhood, MonotoneInRadius) {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = fixtures::random_connected_graph(25, 0.1, rng, true);
        const NodeSet seeds{static_cast<NodeId>(uniform_below(rng, 25))};
        NodeSet prev = seeds;
        for (double k = 0.0; k <= 6.0; k += 0.37) {
            const auto cur = k_neighborhood(g, seeds, k);
            EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            prev = cur;
        }
    }
}

TEST(KNeighborhood, RejectsEmptySeeds) {
    EXPECT_THROW(k_neighborhood(fixtures::path_graph(3), NodeSet{}, 1), GraphError);
}

TEST(Components, TwoTriangles) {
    const auto comps = connected_components(two_triangles());
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0], (NodeSet{0, 1, 2}));
    EXPECT_EQ(comps[1], (NodeSet{3, 4, 5}));
}

TEST(Components, CompleteGraphIsOneComponent) {
    EXPECT_EQ(connected_components(fixtures::complete_graph(4)).size(), 1u);
    EXPECT_TRUE(is_connected(fixtures::complete_graph(4)));
}

TEST(Components, RestrictionSplitsPath) {
    const auto comps = connected_components(fixtures::path_graph(3), NodeSet{0, 2});
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0], NodeSet{0});
    EXPECT_EQ(comps[1], NodeSet{2});
}

TEST(Components, LargestComponentKeepsLabels) {
    const auto g = build_graph({{0, 1, 1}, {5, 6, 1}, {6, 7, 1}});
    const auto lcc = largest_connected_component(g);
    EXPECT_EQ(lcc.graph.num_nodes(), 3u);
    EXPECT_EQ(lcc.graph.label(0), "5");
    EXPECT_EQ(lcc.to_parent, (std::vector<NodeId>{2, 3, 4}));
}

TEST(InducedSubgraph, KeepsInternalEdgesOnly) {
    const auto sub = induced_subgraph(fixtures::complete_graph(5), NodeSet{1, 3, 4});
    EXPECT_EQ(sub.graph.num_edges(), 3u);
    EXPECT_DOUBLE_EQ(sub.graph.total_volume(), 6.0);
}

TEST(Caveman, CliquesHaveTwoBoundaryEdges) {
    const auto g = connected_caveman(100, 10);
    EXPECT_EQ(g.num_nodes(), 1000u);
    EXPECT_EQ(g.num_edges(), 100u * 45u);
    for (NodeId c = 0; c < 100; ++c) {
        std::vector<NodeId> m(10);
        std::iota(m.begin(), m.end(), c * 10);
        const NodeSet s(m);
        EXPECT_DOUBLE_EQ(cut(g, s), 2.0);
        EXPECT_DOUBLE_EQ(volume(g, s), 90.0);
    }
}
