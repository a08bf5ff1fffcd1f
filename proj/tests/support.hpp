#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include <ncpkit/graph.hpp>
#include <ncpkit/random.hpp>

namespace ncpkit::fixtures {

/// Random spanning tree plus each remaining pair with probability p.
inline Graph random_connected_graph(std::size_t n, double p, Rng& rng, bool weighted = false) {
    std::vector<WeightedEdge<NodeId>> edges;
    auto weight = [&] { return weighted ? 0.25 + 2.0 * uniform_unit(rng) : 1.0; };
    std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
    for (NodeId v = 1; v < n; ++v) {
        const auto u = static_cast<NodeId>(uniform_below(rng, v));
        edges.push_back({u, v, weight()});
        used[u][v] = used[v][u] = 1;
    }
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (!used[u][v] && uniform_unit(rng) < p) {
                edges.push_back({u, v, weight()});
            }
        }
    }
    return Graph::from_indexed(n, edges);
}

/// G(n, p) without connectivity guarantees.
inline Graph random_graph(std::size_t n, double p, Rng& rng, bool weighted = false) {
    std::vector<WeightedEdge<NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (uniform_unit(rng) < p) {
                edges.push_back({u, v, weighted ? 0.25 + 2.0 * uniform_unit(rng) : 1.0});
            }
        }
    }
    return Graph::from_indexed(n, edges);
}

inline Eigen::MatrixXd dense_adjacency(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edge_list()) {
        a(e.u, e.v) = e.w;
        a(e.v, e.u) = e.w;
    }
    return a;
}

/// Conductance straight from the adjacency matrix and a membership mask.
inline double dense_conductance(const Eigen::MatrixXd& a, std::uint32_t mask) {
    double cut = 0.0;
    double vol_in = 0.0;
    double vol_out = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const bool in = (mask >> i) & 1U;
        const double d = a.row(i).sum();
        (in ? vol_in : vol_out) += d;
        if (in) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                if (!((mask >> j) & 1U)) {
                    cut += a(i, j);
                }
            }
        }
    }
    return cut / std::min(vol_in, vol_out);
}

/// Minimum conductance for every size 1..n/2 over all node subsets.
inline std::vector<double> brute_force_ncp(const Graph& g) {
    const auto n = g.num_nodes();
    const auto a = dense_adjacency(g);
    std::vector<double> best(n / 2 + 1, std::numeric_limits<double>::infinity());
    for (std::uint32_t mask = 1; mask + 1 < (1U << n); ++mask) {
        const auto k = static_cast<std::size_t>(__builtin_popcount(mask));
        if (k > n / 2) {
            continue;
        }
        best[k] = std::min(best[k], dense_conductance(a, mask));
    }
    return best;
}

inline Graph path_graph(std::size_t n) {
    std::vector<WeightedEdge<NodeId>> edges;
    for (NodeId v = 0; v + 1 < n; ++v) {
        edges.push_back({v, v + 1, 1.0});
    }
    return Graph::from_indexed(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<WeightedEdge<NodeId>> edges;
    for (NodeId v = 0; v < n; ++v) {
        edges.push_back({v, static_cast<NodeId>((v + 1) % n), 1.0});
    }
    return Graph::from_indexed(n, edges);
}

inline Graph complete_graph(std::size_t n) {
    std::vector<WeightedEdge<NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            edges.push_back({u, v, 1.0});
        }
    }
    return Graph::from_indexed(n, edges);
}

}  // namespace ncpkit::fixtures
