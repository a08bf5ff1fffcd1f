#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include <ncpkit/generators.hpp>
#include <ncpkit/quality.hpp>

#include "support.hpp"

using namespace ncpkit;

namespace {

Graph two_triangles() {
    return build_graph({{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
}

Graph star(std::size_t leaves) {
    std::vector<WeightedEdge<NodeId>> edges;
    for (NodeId v = 1; v <= leaves; ++v) {
        edges.push_back({0, v, 1.0});
    }
    return Graph::from_indexed(leaves + 1, edges);
}

/// Smallest nonzero eigenvalue of D^{-1/2} L D^{-1/2} by dense decomposition.
double dense_lambda2(const Graph& g) {
    const auto a = fixtures::dense_adjacency(g);
    const Eigen::VectorXd d = a.rowwise().sum();
    const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd lap =
        Eigen::MatrixXd::Identity(a.rows(), a.cols()) - s.asDiagonal() * a * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    return es.eigenvalues()(1);
}

/// phi of the induced subgraph by enumeration over masks of the dense block.
double dense_internal_conductance(const Graph& g, const NodeSet& c) {
    const auto a = fixtures::dense_adjacency(g);
    Eigen::MatrixXd sub(c.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(c[i], c[j]);
        }
    }
    double best = kInfinity;
    for (std::uint32_t mask = 1; mask + 1 < (1U << c.size()); ++mask) {
        best = std::min(best, fixtures::dense_conductance(sub, mask));
    }
    return best;
}

}  // namespace

TEST(Conductance, CompleteGraphHalf) {
    EXPECT_DOUBLE_EQ(conductance(fixtures::complete_graph(4), NodeSet{0, 1}), 2.0 / 3.0);
}

TEST(Conductance, WholeTriangleOfTwo) {
    EXPECT_DOUBLE_EQ(conductance(two_triangles(), NodeSet{0, 1, 2}), 0.0);
}

TEST(Conductance, StarLeaf) {
    EXPECT_DOUBLE_EQ(conductance(star(3), NodeSet{2}), 1.0);
}

TEST(Conductance, RejectsEmptyAndFullSets) {
    const auto g = fixtures::complete_graph(4);
    EXPECT_THROW(conductance(g, NodeSet{}), GraphError);
    EXPECT_THROW(conductance(g, NodeSet::range(4)), GraphError);
}

TEST(Conductance, MatchesDenseOracleAndComplement) {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = fixtures::random_connected_graph(10, 0.3, rng, true);
        const auto a = fixtures::dense_adjacency(g);
        const auto mask = static_cast<std::uint32_t>(1 + uniform_below(rng, (1U << 10) - 2));
        std::vector<NodeId> m;
        for (NodeId v = 0; v < 10; ++v) {
            if ((mask >> v) & 1U) {
                m.push_back(v);
            }
        }
        const NodeSet s(m);
        const double phi = conductance(g, s);
        EXPECT_NEAR(phi, fixtures::dense_conductance(a, mask), 1e-12);
        EXPECT_EQ(phi, conductance(g, s.complement(10)));
        EXPECT_GE(phi, 0.0);
        EXPECT_LE(phi, 1.0);
    }
}

TEST(EdgeExpansion, Examples) {
    EXPECT_DOUBLE_EQ(edge_expansion(fixtures::complete_graph(4), NodeSet{0}), 3.0);
    EXPECT_DOUBLE_EQ(edge_expansion(two_triangles(), NodeSet{0, 1, 2}), 0.0);
    EXPECT_DOUBLE_EQ(edge_expansion(fixtures::cycle_graph(6), NodeSet{0, 1, 2}), 2.0 / 3.0);
    EXPECT_THROW(edge_expansion(fixtures::cycle_graph(6), NodeSet{}), GraphError);
}

TEST(EdgeExpansion, GraphMinimumOnCycle) {
    // best split of C8 is two arcs of 4: 2 cut edges over 4 nodes
    EXPECT_DOUBLE_EQ(graph_expansion(fixtures::cycle_graph(8)), 0.5);
}

TEST(GraphConductance, ExactMinimumMatchesBruteForce) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = fixtures::random_connected_graph(9, 0.35, rng, true);
        const auto ncp = fixtures::brute_force_ncp(g);
        const double oracle = *std::min_element(ncp.begin() + 1, ncp.end());
        const auto exact = graph_conductance_exact(g);
        EXPECT_NEAR(exact.value, oracle, 1e-12);
        EXPECT_NEAR(conductance(g, exact.witness), exact.value, 1e-12);
    }
}

TEST(InternalConductance, CliqueInsideAGraph) {
    const auto g = connected_caveman(3, 5);
    // clique 1 is {5..9} minus edge (5,6); take the untouched K4 {6,7,8,9}
    EXPECT_NEAR(*internal_conductance(g, NodeSet{6, 7, 8, 9}), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(*internal_conductance(fixtures::complete_graph(4), NodeSet::range(4)), 2.0 / 3.0, 1e-12);
}

TEST(InternalConductance, DisconnectedPiecesScoreZero) {
    EXPECT_EQ(*internal_conductance(two_triangles(), NodeSet::range(6)), 0.0);
}

TEST(InternalConductance, InducedPath) {
    const auto g = fixtures::path_graph(6);
    EXPECT_NEAR(*internal_conductance(g, NodeSet{0, 1, 2, 3}), 1.0 / 3.0, 1e-12);
}

TEST(InternalConductance, SingletonIsUndefined) {
    EXPECT_FALSE(internal_conductance(fixtures::complete_graph(4), NodeSet{2}).has_value());
}

TEST(InternalConductance, SingleEdgeIsOne) {
    EXPECT_DOUBLE_EQ(*internal_conductance(fixtures::complete_graph(4), NodeSet{0, 1}), 1.0);
}

TEST(InternalConductance, ExactMatchesDenseEnumeration) {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = fixtures::random_connected_graph(14, 0.3, rng, true);
        std::vector<NodeId> m;
        for (NodeId v = 0; v < 14; ++v) {
            if (uniform_below(rng, 3) != 0) {
                m.push_back(v);
            }
        }
        const NodeSet c(m);
        if (c.size() < 2) {
            continue;
        }
        const auto sub = induced_subgraph(g, c);
        const auto exact = internal_conductance(g, c, InternalMode::exact);
        if (!is_connected(sub.graph)) {
            EXPECT_EQ(*exact, 0.0);
            continue;
        }
        EXPECT_NEAR(*exact, dense_internal_conductance(g, c), 1e-12);
    }
}

TEST(InternalConductance, SpectralIsAnUpperBound) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = fixtures::random_connected_graph(12, 0.25, rng, true);
        const auto all = NodeSet::range(12);
        const double exact = *internal_conductance(g, all, InternalMode::exact);
        const double spectral = *internal_conductance(g, all, InternalMode::spectral);
        EXPECT_GE(spectral, exact - 1e-12);
    }
}

TEST(ConductanceRatio, WholeTriangleIsZero) {
    const auto g = two_triangles();
    const NodeSet c{0, 1, 2};
    EXPECT_DOUBLE_EQ(*internal_conductance(g, c), 1.0);
    EXPECT_DOUBLE_EQ(*conductance_ratio(g, c), 0.0);
}

TEST(ConductanceRatio, DisconnectedWitnessIsInfinite) {
    // two triangles bridged to a hub: {0, 3} is internally disconnected
    const auto g = build_graph({{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 6, 1}, {5, 6, 1}});
    EXPECT_EQ(*conductance_ratio(g, NodeSet{0, 3}), kInfinity);
}

TEST(ConductanceRatio, UnionOfComponentsIsUndefined) {
    const auto g = build_graph({{0, 1, 1}, {2, 3, 1}, {4, 5, 1}});
    EXPECT_FALSE(conductance_ratio(g, NodeSet{0, 1, 2, 3}).has_value());
}

TEST(ConductanceRatio, CavemanClique) {
    const auto g = connected_caveman(3, 4);
    const NodeSet clique{0, 1, 2, 3};
    const auto r = evaluate(g, clique);
    EXPECT_DOUBLE_EQ(r.cut, 2.0);
    EXPECT_DOUBLE_EQ(r.volume, 12.0);
    EXPECT_DOUBLE_EQ(r.conductance, 1.0 / 6.0);
    // the clique misses its rewired edge (0,1); its best split is {0,2}|{1,3}
    EXPECT_NEAR(*r.internal_conductance, 3.0 / 5.0, 1e-12);
    EXPECT_NEAR(*r.ratio, 5.0 / 18.0, 1e-12);
}

TEST(Clustering, Examples) {
    const auto tri = fixtures::complete_graph(3);
    EXPECT_DOUBLE_EQ(clustering_coefficient(tri, 0), 1.0);
    EXPECT_DOUBLE_EQ(clustering_coefficient(fixtures::path_graph(3), 1), 0.0);
    EXPECT_DOUBLE_EQ(clustering_coefficient(fixtures::path_graph(3), 0), 0.0);
    const auto weighted = build_graph({{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 0.5}});
    EXPECT_NEAR(clustering_coefficient(weighted, 0), std::cbrt(0.5), 1e-12);
}

TEST(Clustering, UniformWeightsMatchTriangleCount) {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = fixtures::random_graph(15, 0.35, rng);
        const auto a = fixtures::dense_adjacency(g);
        for (NodeId i = 0; i < 15; ++i) {
            const auto k = g.degree(i);
            double triangles = 0.0;
            for (NodeId j = 0; j < 15; ++j) {
                for (NodeId l = j + 1; l < 15; ++l) {
                    triangles += a(i, j) * a(i, l) * a(j, l);
                }
            }
            const double expected = k < 2 ? 0.0 : triangles / (0.5 * static_cast<double>(k * (k - 1)));
            EXPECT_NEAR(clustering_coefficient(g, i), expected, 1e-12);
        }
    }
}

TEST(Lambda2, SmallFixtures) {
    EXPECT_NEAR(lambda2(fixtures::complete_graph(4)), 4.0 / 3.0, 1e-8);
    EXPECT_NEAR(lambda2(fixtures::cycle_graph(4)), 1.0, 1e-8);
    EXPECT_NEAR(lambda2(fixtures::complete_graph(2)), 2.0, 1e-8);
}

TEST(Lambda2, RejectsDisconnected) {
    EXPECT_THROW(lambda2(two_triangles()), GraphError);
}

TEST(Lambda2, MatchesDenseEigensolver) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = fixtures::random_connected_graph(40, 0.08, rng, true);
        EXPECT_NEAR(lambda2(g), dense_lambda2(g), 1e-8);
    }
}

TEST(Lambda2, CheegerLowerBound) {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = fixtures::random_connected_graph(10, 0.3, rng, true);
        EXPECT_LE(lambda2(g) / 2.0, graph_conductance_exact(g).value + 1e-12);
    }
}

TEST(GraphStats, CompleteGraphRow) {
    const auto s = graph_stats(fixtures::complete_graph(4));
    EXPECT_EQ(s.n, 4u);
    EXPECT_EQ(s.m, 6u);
    EXPECT_DOUBLE_EQ(s.mean_strength, 3.0);
    EXPECT_NEAR(s.lambda2, 4.0 / 3.0, 1e-8);
    EXPECT_DOUBLE_EQ(s.mean_clustering, 1.0);
}
