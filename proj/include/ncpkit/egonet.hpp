#pragma once

// Geodesic spreading: EgoRank_i(s) = 1 / (1 + dist(i, s)). Its sweep sets are
// the k-ego-nets of the seed.

#include <cmath>
#include <vector>

#include "graph.hpp"
#include "rank.hpp"

namespace ncpkit {

/// Unreachable nodes are left out of the vector (score 0).
inline RankVector egorank(const Graph& g, NodeId seed, LengthMode lengths = LengthMode::inverse_weight) {
    const auto dist = geodesic_distances(g, seed, lengths);
    RankVector out;
    out.method = Method::egonet;
    out.seed = seed;
    for (NodeId v = 0; v < dist.size(); ++v) {
        if (dist[v] != kInfinity) {
            out.nodes.push_back(v);
            out.scores.push_back(1.0 / (1.0 + dist[v]));
        }
    }
    return out;
}

/// Nodes within distance k of the seed, seed included.
inline NodeSet k_ego_net(const Graph& g, NodeId seed, double k, LengthMode lengths = LengthMode::inverse_weight) {
    return k_neighborhood(g, NodeSet{seed}, k, lengths);
}

}  // namespace ncpkit
