#include <gtest/gtest.h>

#include <ncpkit/association.hpp>
#include <ncpkit/random.hpp>

#include "support.hpp"

using namespace ncpkit;

namespace {

AssociationMatrix from_samples(std::size_t n, const std::vector<NodeSet>& samples) {
    return AssociationMatrix::accumulate(n, samples);
}

std::vector<NodeSet> repeated(const NodeSet& s, int times) {
    return std::vector<NodeSet>(static_cast<std::size_t>(times), s);
}

bool contiguous(const std::vector<NodeId>& order, const NodeSet& block) {
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (block.contains(order[k])) {
            pos.push_back(k);
        }
    }
    return !pos.empty() && pos.back() - pos.front() + 1 == pos.size();
}

}  // namespace

TEST(Association, OverlappingSamples) {
    const auto a = from_samples(4, {NodeSet{1, 2}, NodeSet{1, 2, 3}});
    EXPECT_DOUBLE_EQ(*a.value(1, 2), 1.0);
    EXPECT_DOUBLE_EQ(*a.value(1, 3), 0.5);
    EXPECT_DOUBLE_EQ(*a.value(2, 3), 0.5);
    EXPECT_EQ(a.num_samples(), 2u);
}

TEST(Association, SingleSampleMasksTheRest) {
    const auto a = from_samples(4, {NodeSet{0, 2}});
    EXPECT_DOUBLE_EQ(*a.value(0, 2), 1.0);
    EXPECT_DOUBLE_EQ(*a.value(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(*a.value(0, 1), 0.0);
    EXPECT_FALSE(a.value(1, 3).has_value());
    EXPECT_FALSE(a.value(1, 1).has_value());
    EXPECT_EQ(a.value_or_zero(1, 3), 0.0);
}

TEST(Association, DisjointSamples) {
    const auto a = from_samples(3, {NodeSet{1}, NodeSet{2}});
    EXPECT_EQ(a.either_count(1, 2), 2u);
    EXPECT_DOUBLE_EQ(*a.value(1, 2), 0.0);
}

TEST(Association, RejectsBadSamples) {
    AssociationMatrix a(3);
    EXPECT_THROW(a.add(NodeSet{}), GraphError);
    EXPECT_THROW(a.add(NodeSet{0, 3}), GraphError);
}

TEST(Association, NonzeroEntriesAreSortedUpperTriangle) {
    const auto a = from_samples(4, {NodeSet{1, 2}, NodeSet{1, 2, 3}});
    const auto e = a.nonzero_entries();
    const std::vector<std::tuple<NodeId, NodeId, double>> expected{
        {1, 1, 1.0}, {1, 2, 1.0}, {1, 3, 0.5}, {2, 2, 1.0}, {2, 3, 0.5}, {3, 3, 1.0}};
    EXPECT_EQ(e, expected);
}

TEST(Association, MergeEqualsAccumulatingEverything) {
    Rng rng(3);
    std::vector<NodeSet> left;
    std::vector<NodeSet> right;
    for (int k = 0; k < 40; ++k) {
        std::vector<NodeId> pick;
        for (NodeId v = 0; v < 12; ++v) {
            if (uniform_below(rng, 3) == 0) {
                pick.push_back(v);
            }
        }
        if (!pick.empty()) {
            (k % 2 ? left : right).emplace_back(pick);
        }
    }
    auto merged = from_samples(12, left);
    merged.merge(from_samples(12, right));
    auto all = left;
    all.insert(all.end(), right.begin(), right.end());
    EXPECT_EQ(merged.nonzero_entries(), from_samples(12, all).nonzero_entries());
    EXPECT_THROW(merged.merge(AssociationMatrix(5)), GraphError);
}

TEST(OrderNodes, BlocksBecomeContiguous) {
    auto samples = repeated(NodeSet{0, 2, 4}, 3);
    const auto other = repeated(NodeSet{1, 3, 5}, 3);
    samples.insert(samples.end(), other.begin(), other.end());
    const auto order = order_nodes(from_samples(6, samples));
    EXPECT_TRUE(contiguous(order, NodeSet{0, 2, 4}));
    EXPECT_TRUE(contiguous(order, NodeSet{1, 3, 5}));
}

TEST(OrderNodes, IdentityKeepsInputOrder) {
    const auto order = order_nodes(from_samples(4, {NodeSet{0}, NodeSet{1}, NodeSet{2}, NodeSet{3}}));
    EXPECT_EQ(order, (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(OrderNodes, StrongPairIsAdjacent) {
    // A(0,2) = 0.9, A(0,1) = 0.1, A(1,2) = 0
    auto samples = repeated(NodeSet{0, 2}, 9);
    samples.push_back(NodeSet{0, 1});
    const auto a = from_samples(3, samples);
    ASSERT_DOUBLE_EQ(*a.value(0, 2), 0.9);
    ASSERT_DOUBLE_EQ(*a.value(0, 1), 0.1);
    const auto order = order_nodes(a);
    EXPECT_TRUE(contiguous(order, NodeSet{0, 2}));
}

TEST(OrderNodes, NeverSampledNodesGoLast) {
    const auto order = order_nodes(from_samples(5, {NodeSet{3, 4}, NodeSet{1}}));
    ASSERT_EQ(order.size(), 5u);
    EXPECT_EQ(order[3], 0u);
    EXPECT_EQ(order[4], 2u);
}

TEST(OrderNodes, IsAPermutationAndDeterministic) {
    Rng rng(8);
    std::vector<NodeSet> samples;
    for (int k = 0; k < 30; ++k) {
        const auto start = static_cast<NodeId>(uniform_below(rng, 20));
        std::vector<NodeId> pick;
        for (NodeId v = start; v < std::min<NodeId>(20, start + 4); ++v) {
            pick.push_back(v);
        }
        samples.emplace_back(pick);
    }
    const auto a = from_samples(20, samples);
    const auto order = order_nodes(a);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<NodeId> ids(20);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    EXPECT_EQ(sorted, ids);
    EXPECT_EQ(order_nodes(a), order);
}

TEST(Reweight, AllOnesKeepsEveryEdge) {
    const auto g = fixtures::complete_graph(4);
    const auto r = reweight_graph(g, from_samples(4, {NodeSet{0, 1, 2, 3}}));
    EXPECT_EQ(r.num_edges(), 6u);
    for (const auto& e : r.edge_list()) {
        EXPECT_EQ(e.w, 1.0);
    }
}

TEST(Reweight, ZeroAssociationDropsEdge) {
    const auto g = fixtures::path_graph(3);
    const auto r = reweight_graph(g, from_samples(3, {NodeSet{0, 1}, NodeSet{2}}));
    EXPECT_EQ(r.num_edges(), 1u);
    EXPECT_EQ(r.weight(0, 1), 1.0);
    EXPECT_EQ(r.num_nodes(), 3u);
}

TEST(Reweight, MeanThresholdKeepsHeavyEdges) {
    const auto g = build_graph({{0, 1, 1}, {2, 3, 1}, {4, 5, 1}});
    std::vector<NodeSet> samples;
    auto add = [&](const NodeSet& s, int times) {
        const auto r = repeated(s, times);
        samples.insert(samples.end(), r.begin(), r.end());
    };
    add(NodeSet{0, 1}, 1);
    add(NodeSet{0}, 4);
    add(NodeSet{2, 3}, 2);
    add(NodeSet{2}, 3);
    add(NodeSet{4, 5}, 9);
    add(NodeSet{4}, 1);
    const auto a = from_samples(6, samples);
    ASSERT_DOUBLE_EQ(*a.value(0, 1), 0.2);
    ASSERT_DOUBLE_EQ(*a.value(2, 3), 0.4);
    ASSERT_DOUBLE_EQ(*a.value(4, 5), 0.9);
    const auto r = reweight_graph(g, a, true);
    ASSERT_EQ(r.num_edges(), 1u);
    EXPECT_DOUBLE_EQ(r.weight(4, 5), 0.9);
    EXPECT_EQ(reweight_graph(g, a).num_edges(), 3u);
}
