#pragma once

// Association matrices: how often two nodes land in the same sampled local
// community, normalised by how often either of them is sampled.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "graph.hpp"

namespace ncpkit {

class AssociationMatrix {
public:
    AssociationMatrix() = default;
    explicit AssociationMatrix(std::size_t n) : n_(n), appear_(n, 0) {}

    static AssociationMatrix accumulate(std::size_t n, std::span<const NodeSet> samples) {
        AssociationMatrix a(n);
        for (const auto& s : samples) {
            a.add(s);
        }
        return a;
    }

    void add(const NodeSet& sample) {
        if (sample.empty()) {
            throw GraphError("association samples must be nonempty");
        }
        if (sample.members().back() >= n_) {
            throw GraphError("association sample references a node outside the universe");
        }
        ++num_samples_;
        const auto& m = sample.members();
        for (std::size_t a = 0; a < m.size(); ++a) {
            ++appear_[m[a]];
            for (std::size_t b = a + 1; b < m.size(); ++b) {
                ++co_[key(m[a], m[b])];
            }
        }
    }

    /// Additive merge of counts from another accumulator over the same universe.
    void merge(const AssociationMatrix& other) {
        if (other.n_ != n_) {
            throw GraphError("association universes differ");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            appear_[i] += other.appear_[i];
        }
        for (const auto& [k, c] : other.co_) {
            co_[k] += c;
        }
        num_samples_ += other.num_samples_;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t num_samples() const noexcept { return num_samples_; }
    [[nodiscard]] std::uint64_t appearances(NodeId i) const { return appear_.at(i); }

    [[nodiscard]] std::uint64_t co_count(NodeId i, NodeId j) const {
        if (i == j) {
            return appear_.at(i);
        }
        const auto it = co_.find(key(i, j));
        return it == co_.end() ? 0 : it->second;
    }

    /// |{S : i in S or j in S}| = cnt(i) + cnt(j) - co(i, j).
    [[nodiscard]] std::uint64_t either_count(NodeId i, NodeId j) const {
        if (i == j) {
            return appear_.at(i);
        }
        return appear_.at(i) + appear_.at(j) - co_count(i, j);
    }

    /// Normalised co-membership; nullopt when neither node was ever sampled.
    [[nodiscard]] std::optional<double> value(NodeId i, NodeId j) const {
        const auto either = either_count(i, j);
        if (either == 0) {
            return std::nullopt;
        }
        return static_cast<double>(co_count(i, j)) / static_cast<double>(either);
    }

    /// Masked pairs read as 0.
    [[nodiscard]] double value_or_zero(NodeId i, NodeId j) const { return value(i, j).value_or(0.0); }

    /// Nonzero entries with i <= j, sorted.
    [[nodiscard]] std::vector<std::tuple<NodeId, NodeId, double>> nonzero_entries() const {
        std::vector<std::tuple<NodeId, NodeId, double>> out;
        for (NodeId i = 0; i < n_; ++i) {
            if (appear_[i] > 0) {
                out.emplace_back(i, i, 1.0);
            }
        }
        for (const auto& [k, c] : co_) {
            const auto i = static_cast<NodeId>(k >> 32);
            const auto j = static_cast<NodeId>(k & 0xffffffffu);
            out.emplace_back(i, j, static_cast<double>(c) / static_cast<double>(either_count(i, j)));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static std::uint64_t key(NodeId i, NodeId j) {
        const auto [a, b] = std::minmax(i, j);
        return (std::uint64_t{a} << 32) | b;
    }

    std::size_t n_ = 0;
    std::size_t num_samples_ = 0;
    std::vector<std::uint64_t> appear_;
    std::unordered_map<std::uint64_t, std::uint64_t> co_;
};

/// Leaf order of the average-linkage dendrogram on dissimilarity 1 - A.
///
/// Merges take the closest pair, ties broken by the smaller cluster
/// representative (the smallest original index in the cluster). At each merge
/// the child with larger mean internal association goes first (singletons
/// count as 0), ties go to the smaller representative. Nodes that never
/// appeared in a sample follow in index order.
inline std::vector<NodeId> order_nodes(const AssociationMatrix& a) {
    std::vector<NodeId> active_nodes;
    std::vector<NodeId> absent;
    for (NodeId i = 0; i < a.size(); ++i) {
        (a.appearances(i) > 0 ? active_nodes : absent).push_back(i);
    }
    const auto m = active_nodes.size();
    std::vector<double> dist(m * m, 0.0);
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = p + 1; q < m; ++q) {
            const double d = 1.0 - a.value_or_zero(active_nodes[p], active_nodes[q]);
            dist[p * m + q] = d;
            dist[q * m + p] = d;
        }
    }
    struct Cluster {
        std::vector<NodeId> leaves;
        double internal_sum = 0.0;  // sum of association over internal pairs
        std::size_t size = 1;
        bool alive = true;
    };
    std::vector<Cluster> clusters(m);
    for (std::size_t p = 0; p < m; ++p) {
        clusters[p].leaves = {active_nodes[p]};
    }
    constexpr auto kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> nn(m, kNone);
    std::vector<double> nn_dist(m, kInfinity);
    auto refresh = [&](std::size_t p) {
        nn[p] = kNone;
        nn_dist[p] = kInfinity;
        for (std::size_t q = 0; q < m; ++q) {
            if (q != p && clusters[q].alive && dist[p * m + q] < nn_dist[p]) {
                nn_dist[p] = dist[p * m + q];
                nn[p] = q;
            }
        }
    };
    for (std::size_t p = 0; p < m; ++p) {
        refresh(p);
    }
    auto mean_internal = [](const Cluster& c) {
        if (c.size < 2) {
            return 0.0;
        }
        return c.internal_sum / (0.5 * static_cast<double>(c.size) * static_cast<double>(c.size - 1));
    };

    // Cluster slots are indexed by position in active_nodes, so the slot of a
    // cluster is its smallest member and slot order equals representative order.
    for (std::size_t merges = 1; merges < m; ++merges) {
        std::size_t p = kNone;
        for (std::size_t i = 0; i < m; ++i) {
            if (clusters[i].alive && nn[i] != kNone && (p == kNone || nn_dist[i] < nn_dist[p])) {
                p = i;
            }
        }
        const std::size_t q = nn[p];  // q > p by the tie rule
        auto& cp = clusters[p];
        auto& cq = clusters[q];
        const double d_pq = dist[p * m + q];
        const double cross = static_cast<double>(cp.size) * static_cast<double>(cq.size) * (1.0 - d_pq);
        const bool q_first = mean_internal(cq) > mean_internal(cp);
        std::vector<NodeId> leaves;
        leaves.reserve(cp.leaves.size() + cq.leaves.size());
        const auto& first = q_first ? cq.leaves : cp.leaves;
        const auto& second = q_first ? cp.leaves : cq.leaves;
        leaves.insert(leaves.end(), first.begin(), first.end());
        leaves.insert(leaves.end(), second.begin(), second.end());

        // Lance-Williams update for average linkage
        for (std::size_t r = 0; r < m; ++r) {
            if (r == p || r == q || !clusters[r].alive) {
                continue;
            }
            const double d = (static_cast<double>(cp.size) * dist[p * m + r] +
                              static_cast<double>(cq.size) * dist[q * m + r]) /
                             static_cast<double>(cp.size + cq.size);
            dist[p * m + r] = d;
            dist[r * m + p] = d;
        }
        cp.internal_sum += cq.internal_sum + cross;
        cp.size += cq.size;
        cp.leaves = std::move(leaves);
        cq.alive = false;
        cq.leaves.clear();

        refresh(p);
        for (std::size_t r = 0; r < m; ++r) {
            if (!clusters[r].alive || r == p) {
                continue;
            }
            if (nn[r] == p || nn[r] == q) {
                refresh(r);
            } else if (dist[r * m + p] < nn_dist[r] || (dist[r * m + p] == nn_dist[r] && p < nn[r])) {
                nn[r] = p;
                nn_dist[r] = dist[r * m + p];
            }
        }
    }

    std::vector<NodeId> order;
    order.reserve(a.size());
    for (std::size_t p = 0; p < m; ++p) {
        if (clusters[p].alive) {
            order.insert(order.end(), clusters[p].leaves.begin(), clusters[p].leaves.end());
        }
    }
    order.insert(order.end(), absent.begin(), absent.end());
    return order;
}

/// Graph with each edge reweighted by its association value. Edges with value
/// 0 are dropped; with `above_mean`, only edges strictly heavier than the mean
/// reweighted edge are kept.
inline Graph reweight_graph(const Graph& g, const AssociationMatrix& a, bool above_mean = false) {
    if (a.size() != g.num_nodes()) {
        throw GraphError("association matrix and graph have different node counts");
    }
    std::vector<WeightedEdge<NodeId>> edges;
    for (const auto& e : g.edge_list()) {
        const double w = a.value_or_zero(e.u, e.v);
        if (w > 0.0) {
            edges.push_back({e.u, e.v, w});
        }
    }
    if (above_mean && !edges.empty()) {
        double mean = 0.0;
        for (const auto& e : edges) {
            mean += e.w;
        }
        mean /= static_cast<double>(edges.size());
        std::erase_if(edges, [mean](const auto& e) { return !(e.w > mean); });
    }
    return Graph::from_indexed(g.num_nodes(), edges, g.labels());
}

}  // namespace ncpkit
