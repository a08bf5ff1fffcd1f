#pragma once

#include <vector>

#include "graph.hpp"

namespace ncpkit {

/// Ring of `cliques` complete graphs on `size` nodes each. In every clique the
/// edge between its first two nodes is removed and its first node is joined to
/// the last node of the previous clique, so each clique keeps one fewer
/// internal edge and has exactly two boundary edges.
inline Graph connected_caveman(std::size_t cliques, std::size_t size) {
    if (cliques < 2 || size < 3) {
        throw GraphError("caveman graph needs at least two cliques of at least three nodes");
    }
    const auto n = cliques * size;
    std::vector<WeightedEdge<NodeId>> edges;
    edges.reserve(cliques * size * (size - 1) / 2);
    for (std::size_t c = 0; c < cliques; ++c) {
        const auto start = static_cast<NodeId>(c * size);
        for (NodeId a = 0; a < size; ++a) {
            for (NodeId b = a + 1; b < size; ++b) {
                if (a == 0 && b == 1) {
                    continue;
                }
                edges.push_back({start + a, start + b, 1.0});
            }
        }
        const auto prev_last = static_cast<NodeId>((start + n - 1) % n);
        edges.push_back({start, prev_last, 1.0});
    }
    return Graph::from_indexed(n, edges);
}

}  // namespace ncpkit
