#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "graph.hpp"

namespace ncpkit {

enum class Method { aclcut, movcut, egonet };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::aclcut:
            return "aclcut";
        case Method::movcut:
            return "movcut";
        case Method::egonet:
            return "egonet";
    }
    return "unknown";
}

inline Method parse_method(std::string_view s) {
    if (s == "aclcut") {
        return Method::aclcut;
    }
    if (s == "movcut") {
        return Method::movcut;
    }
    if (s == "egonet") {
        return Method::egonet;
    }
    throw GraphError("unknown method '" + std::string(s) + "'");
}

/// Scores produced by one dynamics run. Entries are sparse and sorted by node;
/// a node absent from `nodes` never enters a sweep set.
struct RankVector {
    std::vector<NodeId> nodes;
    std::vector<double> scores;
    /// Push residual (aclcut only), sorted by node.
    std::vector<NodeId> residual_nodes;
    std::vector<double> residual;
    Method method = Method::aclcut;
    NodeId seed = 0;
    /// epsilon for aclcut, alpha for movcut, unused (NaN) for egonet.
    double param = std::nan("");

    [[nodiscard]] std::size_t support_size() const noexcept { return nodes.size(); }

    [[nodiscard]] std::vector<double> dense(std::size_t n) const {
        std::vector<double> out(n, 0.0);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            out[nodes[k]] = scores[k];
        }
        return out;
    }

    [[nodiscard]] double score(NodeId v) const {
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
        if (it == nodes.end() || *it != v) {
            return 0.0;
        }
        return scores[static_cast<std::size_t>(it - nodes.begin())];
    }

    /// Keeps every entry of a dense vector.
    static RankVector from_dense(std::vector<double> values, Method method, NodeId seed, double param) {
        RankVector r;
        r.nodes.resize(values.size());
        for (NodeId v = 0; v < values.size(); ++v) {
            r.nodes[v] = v;
        }
        r.scores = std::move(values);
        r.method = method;
        r.seed = seed;
        r.param = param;
        return r;
    }
};

}  // namespace ncpkit
