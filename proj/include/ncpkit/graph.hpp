#pragma once

// Immutable undirected weighted graph in compressed sparse row form, plus the
// primitive set and distance queries every other module builds on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ncpkit {

using NodeId = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised for malformed graphs, sets and parameters.
class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sorted set of distinct node indices.
class NodeSet {
public:
    NodeSet() = default;

    /// Sorts and deduplicates.
    explicit NodeSet(std::vector<NodeId> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }
    NodeSet(std::initializer_list<NodeId> members) : NodeSet(std::vector<NodeId>(members)) {}

    static NodeSet range(NodeId n) {
        std::vector<NodeId> all(n);
        std::iota(all.begin(), all.end(), NodeId{0});
        NodeSet s;
        s.members_ = std::move(all);
        return s;
    }

    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
    [[nodiscard]] bool contains(NodeId v) const {
        return std::binary_search(members_.begin(), members_.end(), v);
    }
    [[nodiscard]] NodeId operator[](std::size_t i) const { return members_[i]; }
    [[nodiscard]] auto begin() const noexcept { return members_.begin(); }
    [[nodiscard]] auto end() const noexcept { return members_.end(); }
    [[nodiscard]] const std::vector<NodeId>& members() const noexcept { return members_; }

    /// Complement within [0, n).
    [[nodiscard]] NodeSet complement(std::size_t n) const {
        NodeSet out;
        out.members_.reserve(n - std::min(n, members_.size()));
        std::size_t k = 0;
        for (NodeId v = 0; v < n; ++v) {
            if (k < members_.size() && members_[k] == v) {
                ++k;
            } else {
                out.members_.push_back(v);
            }
        }
        return out;
    }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::vector<NodeId> members_;
};

template <typename Node>
struct WeightedEdge {
    Node u;
    Node v;
    double w = 1.0;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

enum class LengthMode { unit, inverse_weight };

class Graph {
public:
    Graph() = default;

    /// Builds from dense indices in [0, n). Nodes without edges are kept.
    /// Duplicate undirected edges sum their weights.
    static Graph from_indexed(std::size_t n, std::span<const WeightedEdge<NodeId>> edges,
                              std::vector<std::string> labels = {}) {
        if (!labels.empty() && labels.size() != n) {
            throw GraphError("label count does not match node count");
        }
        std::vector<std::pair<std::uint64_t, double>> keyed;
        keyed.reserve(edges.size());
        for (const auto& e : edges) {
            if (e.u >= n || e.v >= n) {
                throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                 ") references a node outside [0, " + std::to_string(n) + ")");
            }
            if (e.u == e.v) {
                throw GraphError("self-loop at node " + std::to_string(e.u));
            }
            if (!(e.w > 0.0) || !std::isfinite(e.w)) {
                throw GraphError("non-positive or non-finite weight " + std::to_string(e.w) +
                                 " on edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                 ")");
            }
            const auto [a, b] = std::minmax(e.u, e.v);
            keyed.emplace_back((std::uint64_t{a} << 32) | b, e.w);
        }
        std::sort(keyed.begin(), keyed.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });

        // merge duplicates, summing weights in sorted order for determinism
        std::vector<std::pair<std::uint64_t, double>> merged;
        merged.reserve(keyed.size());
        for (const auto& [key, w] : keyed) {
            if (!merged.empty() && merged.back().first == key) {
                merged.back().second += w;
            } else {
                merged.emplace_back(key, w);
            }
        }

        Graph g;
        g.n_ = n;
        g.m_ = merged.size();
        g.offsets_.assign(n + 1, 0);
        for (const auto& [key, w] : merged) {
            ++g.offsets_[(key >> 32) + 1];
            ++g.offsets_[(key & 0xffffffffu) + 1];
        }
        std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
        g.targets_.resize(2 * g.m_);
        g.weights_.resize(2 * g.m_);
        std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        // keys are sorted by (a, b), so each row receives targets in ascending order
        // once both passes complete; lower neighbours are written in the first pass.
        for (const auto& [key, w] : merged) {
            const auto b = static_cast<NodeId>(key & 0xffffffffu);
            const auto a = static_cast<NodeId>(key >> 32);
            g.targets_[fill[b]] = a;
            g.weights_[fill[b]++] = w;
        }
        for (const auto& [key, w] : merged) {
            const auto b = static_cast<NodeId>(key & 0xffffffffu);
            const auto a = static_cast<NodeId>(key >> 32);
            g.targets_[fill[a]] = b;
            g.weights_[fill[a]++] = w;
        }

        g.strength_.assign(n, 0.0);
        for (NodeId v = 0; v < n; ++v) {
            double s = 0.0;
            for (std::size_t e = g.offsets_[v]; e < g.offsets_[v + 1]; ++e) {
                s += g.weights_[e];
                g.max_weight_ = std::max(g.max_weight_, g.weights_[e]);
            }
            g.strength_[v] = s;
            g.max_strength_ = std::max(g.max_strength_, s);
            g.total_volume_ += s;
        }
        g.labels_ = std::move(labels);
        return g;
    }

    [[nodiscard]] std::size_t num_nodes() const noexcept { return n_; }
    [[nodiscard]] std::size_t num_edges() const noexcept { return m_; }
    [[nodiscard]] double total_volume() const noexcept { return total_volume_; }
    [[nodiscard]] double strength(NodeId v) const { return strength_[v]; }
    [[nodiscard]] std::span<const double> strengths() const noexcept { return strength_; }
    [[nodiscard]] double max_strength() const noexcept { return max_strength_; }
    [[nodiscard]] double max_weight() const noexcept { return max_weight_; }
    [[nodiscard]] std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    /// Neighbours of v in ascending index order.
    [[nodiscard]] std::span<const NodeId> neighbors(NodeId v) const {
        return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    [[nodiscard]] std::span<const double> weights(NodeId v) const {
        return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    /// Weight of edge (u, v), or 0 when absent.
    [[nodiscard]] double weight(NodeId u, NodeId v) const {
        const auto nb = neighbors(u);
        const auto it = std::lower_bound(nb.begin(), nb.end(), v);
        if (it == nb.end() || *it != v) {
            return 0.0;
        }
        return weights(u)[static_cast<std::size_t>(it - nb.begin())];
    }

    [[nodiscard]] bool has_labels() const noexcept { return !labels_.empty(); }
    [[nodiscard]] std::string label(NodeId v) const {
        return labels_.empty() ? std::to_string(v) : labels_[v];
    }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Index of an original label, if present.
    [[nodiscard]] std::optional<NodeId> find_label(const std::string& name) const {
        if (labels_.empty()) {
            try {
                std::size_t pos = 0;
                const auto v = std::stoull(name, &pos);
                if (pos == name.size() && v < n_) {
                    return static_cast<NodeId>(v);
                }
            } catch (const std::exception&) {
            }
            return std::nullopt;
        }
        for (NodeId v = 0; v < n_; ++v) {
            if (labels_[v] == name) {
                return v;
            }
        }
        return std::nullopt;
    }

    void check_node(NodeId v) const {
        if (v >= n_) {
            throw GraphError("node index " + std::to_string(v) + " out of range [0, " +
                             std::to_string(n_) + ")");
        }
    }
    void check_set(const NodeSet& s) const {
        if (!s.empty()) {
            check_node(s.members().back());
        }
    }

    /// Every undirected edge once, with u < v.
    [[nodiscard]] std::vector<WeightedEdge<NodeId>> edge_list() const {
        std::vector<WeightedEdge<NodeId>> out;
        out.reserve(m_);
        for (NodeId u = 0; u < n_; ++u) {
            const auto nb = neighbors(u);
            const auto w = weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (u < nb[k]) {
                    out.push_back({u, nb[k], w[k]});
                }
            }
        }
        return out;
    }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<double> weights_;
    std::vector<double> strength_;
    std::vector<std::string> labels_;
    double total_volume_ = 0.0;
    double max_strength_ = 0.0;
    double max_weight_ = 0.0;
};

/// Builds a graph from labelled edges. Labels are remapped to dense indices in
/// order of first appearance.
inline Graph build_graph(std::span<const WeightedEdge<std::string>> edges) {
    if (edges.empty()) {
        throw GraphError("empty edge list");
    }
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> labels;
    auto intern = [&](const std::string& s) {
        auto [it, inserted] = index.try_emplace(s, static_cast<NodeId>(labels.size()));
        if (inserted) {
            labels.push_back(s);
        }
        return it->second;
    };
    std::vector<WeightedEdge<NodeId>> indexed;
    indexed.reserve(edges.size());
    for (const auto& e : edges) {
        if (!(e.w > 0.0)) {
            throw GraphError("non-positive weight " + std::to_string(e.w) + " on edge (" + e.u +
                             ", " + e.v + ")");
        }
        if (e.u == e.v) {
            throw GraphError("self-loop at node " + e.u);
        }
        indexed.push_back({intern(e.u), intern(e.v), e.w});
    }
    const auto n = labels.size();
    return Graph::from_indexed(n, indexed, std::move(labels));
}

/// Builds a graph from integer identifiers. Identifiers are remapped to dense
/// indices in ascending order, so 0..n-1 inputs keep their indices.
inline Graph build_graph(std::span<const WeightedEdge<std::int64_t>> edges) {
    if (edges.empty()) {
        throw GraphError("empty edge list");
    }
    std::vector<std::int64_t> ids;
    ids.reserve(2 * edges.size());
    for (const auto& e : edges) {
        ids.push_back(e.u);
        ids.push_back(e.v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const bool identity = ids.front() == 0 && ids.back() == static_cast<std::int64_t>(ids.size()) - 1;
    auto map = [&](std::int64_t x) {
        return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
    };
    std::vector<WeightedEdge<NodeId>> indexed;
    indexed.reserve(edges.size());
    for (const auto& e : edges) {
        if (!(e.w > 0.0)) {
            throw GraphError("non-positive weight " + std::to_string(e.w) + " on edge (" +
                             std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        }
        indexed.push_back({map(e.u), map(e.v), e.w});
    }
    std::vector<std::string> labels;
    if (!identity) {
        labels.reserve(ids.size());
        for (auto id : ids) {
            labels.push_back(std::to_string(id));
        }
    }
    return Graph::from_indexed(ids.size(), indexed, std::move(labels));
}

inline Graph build_graph(std::initializer_list<WeightedEdge<std::int64_t>> edges) {
    return build_graph(std::span<const WeightedEdge<std::int64_t>>(edges.begin(), edges.size()));
}

/// Membership mask of s over [0, n).
inline std::vector<char> membership_mask(const NodeSet& s, std::size_t n) {
    std::vector<char> mask(n, 0);
    for (auto v : s) {
        mask[v] = 1;
    }
    return mask;
}

/// vol(S1, S2) = sum over i in S1, j in S2 of A_ij.
inline double volume(const Graph& g, const NodeSet& s1, const NodeSet& s2) {
    g.check_set(s1);
    g.check_set(s2);
    const auto in2 = membership_mask(s2, g.num_nodes());
    double total = 0.0;
    for (auto i : s1) {
        const auto nb = g.neighbors(i);
        const auto w = g.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (in2[nb[k]]) {
                total += w[k];
            }
        }
    }
    return total;
}

/// vol(S) = sum of strengths.
inline double volume(const Graph& g, const NodeSet& s) {
    g.check_set(s);
    double total = 0.0;
    for (auto i : s) {
        total += g.strength(i);
    }
    return total;
}

/// Weight crossing between S and its complement.
inline double cut(const Graph& g, const NodeSet& s) {
    g.check_set(s);
    const auto in = membership_mask(s, g.num_nodes());
    double total = 0.0;
    for (auto i : s) {
        const auto nb = g.neighbors(i);
        const auto w = g.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (!in[nb[k]]) {
                total += w[k];
            }
        }
    }
    return total;
}

inline double edge_length(double w, LengthMode mode) {
    return mode == LengthMode::unit ? 1.0 : 1.0 / w;
}

/// Shortest-path distances from a set of sources; entries beyond `limit` are
/// left at infinity and not expanded.
inline std::vector<double> multi_source_distances(const Graph& g, std::span<const NodeId> sources,
                                                  LengthMode mode, double limit = kInfinity) {
    std::vector<double> dist(g.num_nodes(), kInfinity);
    if (mode == LengthMode::unit) {
        std::vector<NodeId> frontier;
        for (auto s : sources) {
            g.check_node(s);
            if (dist[s] != 0.0) {
                dist[s] = 0.0;
                frontier.push_back(s);
            }
        }
        double level = 0.0;
        std::vector<NodeId> next;
        while (!frontier.empty() && level + 1.0 <= limit) {
            level += 1.0;
            next.clear();
            for (auto u : frontier) {
                for (auto v : g.neighbors(u)) {
                    if (dist[v] == kInfinity) {
                        dist[v] = level;
                        next.push_back(v);
                    }
                }
            }
            frontier.swap(next);
        }
        return dist;
    }

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (auto s : sources) {
        g.check_node(s);
        dist[s] = 0.0;
        heap.emplace(0.0, s);
    }
    std::vector<char> done(g.num_nodes(), 0);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[u] || d > dist[u]) {
            continue;
        }
        done[u] = 1;
        const auto nb = g.neighbors(u);
        const auto w = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const double cand = d + edge_length(w[k], mode);
            if (cand < dist[nb[k]] && cand <= limit) {
                dist[nb[k]] = cand;
                heap.emplace(cand, nb[k]);
            }
        }
    }
    return dist;
}

/// Distance from `seed` to every node (infinity when unreachable).
inline std::vector<double> geodesic_distances(const Graph& g, NodeId seed,
                                              LengthMode mode = LengthMode::inverse_weight) {
    const NodeId src[] = {seed};
    return multi_source_distances(g, src, mode);
}

/// All nodes within distance k of some seed; always contains the seeds.
inline NodeSet k_neighborhood(const Graph& g, const NodeSet& seeds, double k,
                              LengthMode mode = LengthMode::inverse_weight) {
    if (seeds.empty()) {
        throw GraphError("k_neighborhood needs at least one seed");
    }
    if (k < 0.0) {
        throw GraphError("neighbourhood radius must be nonnegative");
    }
    const auto dist = multi_source_distances(g, seeds.members(), mode, k);
    std::vector<NodeId> out;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (dist[v] <= k) {
            out.push_back(v);
        }
    }
    return NodeSet(std::move(out));
}

/// Connected components, optionally of the subgraph induced by `restricted_to`.
/// Components are ordered by their smallest member.
inline std::vector<NodeSet> connected_components(const Graph& g,
                                                 const std::optional<NodeSet>& restricted_to = {}) {
    const auto n = g.num_nodes();
    std::vector<char> allowed;
    if (restricted_to) {
        g.check_set(*restricted_to);
        allowed = membership_mask(*restricted_to, n);
    } else {
        allowed.assign(n, 1);
    }
    std::vector<char> seen(n, 0);
    std::vector<NodeSet> components;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (!allowed[s] || seen[s]) {
            continue;
        }
        std::vector<NodeId> members;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (auto v : g.neighbors(u)) {
                if (allowed[v] && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        components.emplace_back(std::move(members));
    }
    return components;
}

inline bool is_connected(const Graph& g) {
    return g.num_nodes() > 0 && connected_components(g).size() == 1;
}

/// A subgraph together with the parent index of each of its nodes.
struct Subgraph {
    Graph graph;
    std::vector<NodeId> to_parent;
};

/// Subgraph induced by `nodes`; node i of the result is nodes[i].
inline Subgraph induced_subgraph(const Graph& g, const NodeSet& nodes) {
    g.check_set(nodes);
    constexpr auto kAbsent = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> local(g.num_nodes(), kAbsent);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        local[nodes[i]] = static_cast<NodeId>(i);
    }
    std::vector<WeightedEdge<NodeId>> edges;
    for (auto u : nodes) {
        const auto nb = g.neighbors(u);
        const auto w = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (u < nb[k] && local[nb[k]] != kAbsent) {
                edges.push_back({local[u], local[nb[k]], w[k]});
            }
        }
    }
    std::vector<std::string> labels;
    if (g.has_labels()) {
        for (auto u : nodes) {
            labels.push_back(g.label(u));
        }
    } else {
        for (auto u : nodes) {
            labels.push_back(std::to_string(u));
        }
    }
    Subgraph out;
    out.graph = Graph::from_indexed(nodes.size(), edges, std::move(labels));
    out.to_parent = nodes.members();
    return out;
}

/// Largest connected component (ties go to the component with the smallest node).
inline Subgraph largest_connected_component(const Graph& g) {
    const auto comps = connected_components(g);
    if (comps.empty()) {
        throw GraphError("graph has no nodes");
    }
    const auto best = std::max_element(comps.begin(), comps.end(),
                                       [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return induced_subgraph(g, *best);
}

}  // namespace ncpkit
