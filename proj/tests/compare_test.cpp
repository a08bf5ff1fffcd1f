#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include <ncpkit/aclcut.hpp>
#include <ncpkit/compare.hpp>
#include <ncpkit/movcut.hpp>

#include "support.hpp"

using namespace ncpkit;

TEST(Spearman, IdentityAndReversal) {
    const std::vector<double> x{1, 2, 3};
    EXPECT_DOUBLE_EQ(*spearman(x, x), 1.0);
    EXPECT_DOUBLE_EQ(*spearman(x, std::vector<double>{3, 2, 1}), -1.0);
}

TEST(Spearman, TiedRanksAreAveraged) {
    const std::vector<double> x{1, 1, 2};
    EXPECT_EQ(average_ranks(x), (std::vector<double>{1.5, 1.5, 3.0}));
    // ranks (1.5, 1.5, 3) against (1, 2, 3): covariance 1.5, variances 1.5 and 2
    EXPECT_NEAR(*spearman(x, std::vector<double>{1, 2, 3}), 1.5 / std::sqrt(1.5 * 2.0), 1e-15);
    EXPECT_NEAR(*spearman(x, std::vector<double>{1, 2, 3}), 0.8660254037844386, 1e-15);
}

TEST(Spearman, UndefinedCases) {
    EXPECT_FALSE(spearman(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}).has_value());
    EXPECT_FALSE(spearman(std::vector<double>{1}, std::vector<double>{1}).has_value());
    EXPECT_THROW(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), GraphError);
}

TEST(Spearman, InvariantUnderMonotoneTransforms) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(20);
        std::vector<double> y(20);
        for (std::size_t i = 0; i < 20; ++i) {
            x[i] = std::floor(10.0 * uniform_unit(rng));
            y[i] = uniform_unit(rng);
        }
        const auto base = *spearman(x, y);
        auto fx = x;
        for (auto& v : fx) {
            v = std::exp(v) - 7.0;
        }
        auto fy = y;
        for (auto& v : fy) {
            v = std::cbrt(v) * 100.0;
        }
        EXPECT_NEAR(*spearman(fx, fy), base, 1e-12);
    }
}

TEST(SampleSeeds, DistinctAndReproducible) {
    const auto a = sample_seeds(100, 50, 9);
    EXPECT_EQ(a, sample_seeds(100, 50, 9));
    EXPECT_NE(a, sample_seeds(100, 50, 10));
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    EXPECT_EQ(sample_seeds(5, 50, 1).size(), 5u);
}

TEST(CompareMethods, ExactPprAgreesWithUnprojectedMovCutOnCycle) {
    // With the seed indicator left unprojected, (L + (1-a)/a D) x = D e_s is
    // a positive multiple of the personalized PageRank vector.
    const auto g = fixtures::cycle_graph(6);
    const double alpha = 0.9;
    const double gamma = gamma_from_alpha(alpha);
    const auto a = fixtures::dense_adjacency(g);
    const Eigen::VectorXd d = a.rowwise().sum();
    const Eigen::MatrixXd op = Eigen::MatrixXd(d.asDiagonal()) - a - gamma * Eigen::MatrixXd(d.asDiagonal());
    for (NodeId s = 0; s < 6; ++s) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(6);
        rhs(s) = d(s);
        const Eigen::VectorXd x = op.fullPivLu().solve(rhs);
        const auto ppr = exact_ppr(g, alpha, s).dense(6);
        // mirror-image nodes tie exactly, so compare the vectors up to scale
        // rather than through ranks that rounding would perturb
        for (NodeId v = 0; v < 6; ++v) {
            EXPECT_NEAR(x(v) / x.sum(), ppr[v], 1e-9);
        }
    }
}

TEST(CompareMethods, PushAndMovCutAgreeNearExactOnCycle) {
    const auto g = fixtures::cycle_graph(6);
    const std::vector<NodeId> seeds{0, 3};
    const std::vector<double> eps{1e-8};
    const std::vector<double> alphas{0.99};
    const auto grid = compare_methods(g, seeds, eps, alphas);
    const auto s = grid.cell(0, 0).summary(MethodPair::aclcut_movcut);
    ASSERT_EQ(s.valid, 2u);
    EXPECT_NEAR(s.min, 1.0, 1e-9);
}

TEST(CompareMethods, EgoRankAgainstItselfIsOne) {
    Rng rng(5);
    const auto g = fixtures::random_connected_graph(30, 0.15, rng, true);
    for (NodeId s = 0; s < 30; s += 7) {
        const auto e = egorank(g, s).dense(30);
        auto support = push_approx_ppr(g, PushParams::from_alpha(0.9, 1e-4, s)).nodes;
        ASSERT_GE(support.size(), 2u);
        EXPECT_DOUBLE_EQ(*detail::restricted_spearman(support, e, e, true), 1.0);
        EXPECT_DOUBLE_EQ(*detail::restricted_spearman(support, e, e, false), 1.0);
    }
}

TEST(CompareMethods, SummaryIsOrderedAndValuesBounded) {
    Rng rng(7);
    const auto g = fixtures::random_connected_graph(60, 0.08, rng, true);
    const auto seeds = sample_seeds(g.num_nodes(), 10, 1);
    const std::vector<double> eps{1e-3, 1e-5};
    const std::vector<double> alphas{0.6, 0.9};
    const auto grid = compare_methods(g, seeds, eps, alphas);
    ASSERT_EQ(grid.cells.size(), 4u);
    for (const auto& cell : grid.cells) {
        EXPECT_FALSE(cell.skipped);
        for (auto p : kMethodPairs) {
            const auto s = cell.summary(p);
            if (s.valid == 0) {
                continue;
            }
            EXPECT_LE(s.min, s.mean + 1e-15);
            EXPECT_LE(s.mean, s.max + 1e-15);
            EXPECT_GE(s.min, -1.0 - 1e-12);
            EXPECT_LE(s.max, 1.0 + 1e-12);
        }
    }
    EXPECT_EQ(grid.cell(1, 0).epsilon, 1e-5);
    EXPECT_EQ(grid.cell(1, 0).alpha, 0.6);
}

TEST(CompareMethods, SingleNodeSupportIsUndefined) {
    // epsilon above 1/d stops the push before anything leaves the seed
    const auto g = fixtures::complete_graph(5);
    const std::vector<NodeId> seeds{0, 1, 2};
    const std::vector<double> eps{0.5};
    const std::vector<double> alphas{0.9};
    const auto grid = compare_methods(g, seeds, eps, alphas);
    for (auto p : kMethodPairs) {
        const auto s = grid.cell(0, 0).summary(p);
        EXPECT_EQ(s.valid, 0u);
        EXPECT_TRUE(std::isnan(s.mean));
    }
}

TEST(CompareMethods, AlphaBeyondSpectralBoundIsSkipped) {
    const auto g = fixtures::cycle_graph(40);
    const std::vector<NodeId> seeds{0};
    const std::vector<double> eps{1e-4};
    // lambda_2 of C_40 is about 0.0123, so gamma(0.5) = -1 is fine while alpha must stay below about 1.0125
    const std::vector<double> alphas{0.5, 1.5};
    const auto grid = compare_methods(g, seeds, eps, alphas);
    EXPECT_FALSE(grid.cell(0, 0).skipped);
    EXPECT_TRUE(grid.cell(0, 1).skipped);
    EXPECT_THROW(compare_methods(g, seeds, std::vector<double>{}, alphas), GraphError);
}

TEST(CompareMethods, ThreadCountDoesNotChangeResults) {
    Rng rng(11);
    const auto g = fixtures::random_connected_graph(50, 0.1, rng, true);
    const auto seeds = sample_seeds(50, 12, 3);
    const std::vector<double> eps{1e-4};
    const std::vector<double> alphas{0.8};
    CompareOptions one;
    CompareOptions four;
    four.threads = 4;
    const auto a = compare_methods(g, seeds, eps, alphas, one);
    const auto b = compare_methods(g, seeds, eps, alphas, four);
    for (std::size_t p = 0; p < 3; ++p) {
        EXPECT_EQ(a.cells[0].values[p], b.cells[0].values[p]);
    }
}
