#pragma once

// Roll-call ingestion: vote-similarity layers and their temporal
// supra-adjacency graph, with consecutive layers coupled through the same actor.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graph.hpp"
#include "io.hpp"

namespace ncpkit {

/// Vote codes: 0 means absent or abstaining, any other integer is a voting
/// option. Empty cells read as 0.
using VoteCode = std::int64_t;

/// Edge weights are the fraction of agreeing votes among bills on which both
/// actors voted. Pairs without shared bills get no edge. Rows are actors.
inline std::vector<WeightedEdge<NodeId>> vote_similarity_edges(const std::vector<std::vector<VoteCode>>& votes) {
    const auto n = votes.size();
    std::vector<WeightedEdge<NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (votes[i].size() != votes[j].size()) {
                throw GraphError("vote rows " + std::to_string(i) + " and " + std::to_string(j) +
                                 " have different lengths");
            }
            std::size_t shared = 0;
            std::size_t agree = 0;
            for (std::size_t k = 0; k < votes[i].size(); ++k) {
                if (votes[i][k] != 0 && votes[j][k] != 0) {
                    ++shared;
                    agree += votes[i][k] == votes[j][k] ? 1 : 0;
                }
            }
            if (shared > 0 && agree > 0) {
                edges.push_back({i, j, static_cast<double>(agree) / static_cast<double>(shared)});
            }
        }
    }
    return edges;
}

/// Layer graph over all actors (isolated actors included), labelled by actor.
inline Graph vote_similarity_layer(const std::vector<std::vector<VoteCode>>& votes,
                                   std::vector<std::string> actors = {}) {
    if (actors.empty()) {
        for (std::size_t i = 0; i < votes.size(); ++i) {
            actors.push_back(std::to_string(i));
        }
    }
    if (actors.size() != votes.size()) {
        throw GraphError("actor count does not match vote rows");
    }
    const auto edges = vote_similarity_edges(votes);
    return Graph::from_indexed(votes.size(), edges, std::move(actors));
}

struct MultilayerSpec {
    /// Layers in temporal order; each layer graph's labels are its actor ids.
    std::vector<Graph> layers;
    std::vector<std::string> layer_names;
    double omega = 1.0;
};

/// Block-diagonal union of the layers plus weight-omega edges joining the same
/// actor in consecutive layers. Nodes are numbered layer by layer and labelled
/// `layer:actor`.
inline Graph build_supra(const MultilayerSpec& spec) {
    if (spec.omega < 0.0) {
        throw GraphError("interlayer weight must be nonnegative");
    }
    if (!spec.layer_names.empty() && spec.layer_names.size() != spec.layers.size()) {
        throw GraphError("layer name count does not match layer count");
    }
    std::vector<WeightedEdge<NodeId>> edges;
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> previous;
    NodeId offset = 0;
    for (std::size_t s = 0; s < spec.layers.size(); ++s) {
        const auto& layer = spec.layers[s];
        const auto name = spec.layer_names.empty() ? std::to_string(s) : spec.layer_names[s];
        std::unordered_map<std::string, NodeId> current;
        for (NodeId v = 0; v < layer.num_nodes(); ++v) {
            const auto actor = layer.label(v);
            if (!current.emplace(actor, offset + v).second) {
                throw GraphError("actor '" + actor + "' appears twice in layer " + name);
            }
            labels.push_back(name + ":" + actor);
            if (spec.omega > 0.0) {
                if (const auto it = previous.find(actor); it != previous.end()) {
                    edges.push_back({it->second, offset + v, spec.omega});
                }
            }
        }
        for (const auto& e : layer.edge_list()) {
            edges.push_back({offset + e.u, offset + e.v, e.w});
        }
        previous = std::move(current);
        offset += static_cast<NodeId>(layer.num_nodes());
    }
    return Graph::from_indexed(offset, edges, std::move(labels));
}

struct VoteTable {
    std::vector<std::string> bills;
    /// Layer names in temporal order.
    std::vector<std::string> layers;
    /// Per layer: actor ids and their vote rows.
    std::vector<std::vector<std::string>> actors;
    std::vector<std::vector<std::vector<VoteCode>>> votes;
};

namespace detail {

inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace detail

/// Reads a CSV with a header row holding `actor_id`, `layer` and one column
/// per bill, one row per actor per layer. Layers are ordered numerically when
/// every layer name is an integer, otherwise by first appearance.
inline VoteTable read_votes_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("vote file is empty");
    }
    const auto header = detail::split_csv(line);
    std::optional<std::size_t> actor_col;
    std::optional<std::size_t> layer_col;
    VoteTable table;
    std::vector<std::size_t> bill_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "actor_id") {
            actor_col = c;
        } else if (header[c] == "layer") {
            layer_col = c;
        } else {
            bill_cols.push_back(c);
            table.bills.push_back(header[c]);
        }
    }
    if (!actor_col || !layer_col) {
        throw ParseError("vote header needs 'actor_id' and 'layer' columns");
    }
    std::vector<std::string> layer_order;
    std::unordered_map<std::string, std::size_t> layer_index;
    std::vector<std::vector<std::string>> actors;
    std::vector<std::vector<std::vector<VoteCode>>> votes;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = detail::split_csv(line);
        if (cells.size() != header.size()) {
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                             " columns, found " + std::to_string(cells.size()));
        }
        auto [it, inserted] = layer_index.try_emplace(cells[*layer_col], layer_order.size());
        if (inserted) {
            layer_order.push_back(cells[*layer_col]);
            actors.emplace_back();
            votes.emplace_back();
        }
        std::vector<VoteCode> record;
        record.reserve(bill_cols.size());
        for (auto c : bill_cols) {
            VoteCode code = 0;
            if (!cells[c].empty() && !detail::parse_int(cells[c], code)) {
                throw ParseError("row " + std::to_string(row) + ", column '" + header[c] + "': malformed vote code '" +
                                 cells[c] + "'");
            }
            record.push_back(code);
        }
        actors[it->second].push_back(cells[*actor_col]);
        votes[it->second].push_back(std::move(record));
    }
    std::vector<std::size_t> perm(layer_order.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::int64_t> numeric(layer_order.size());
    bool all_numeric = true;
    for (std::size_t s = 0; s < layer_order.size(); ++s) {
        all_numeric = all_numeric && detail::parse_int(layer_order[s], numeric[s]);
    }
    if (all_numeric) {
        std::stable_sort(perm.begin(), perm.end(), [&](auto a, auto b) { return numeric[a] < numeric[b]; });
    }
    for (auto s : perm) {
        table.layers.push_back(layer_order[s]);
        table.actors.push_back(std::move(actors[s]));
        table.votes.push_back(std::move(votes[s]));
    }
    return table;
}

inline VoteTable read_votes_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_votes_csv(in);
}

inline MultilayerSpec multilayer_from_votes(const VoteTable& table, double omega = 1.0) {
    MultilayerSpec spec;
    spec.omega = omega;
    spec.layer_names = table.layers;
    for (std::size_t s = 0; s < table.layers.size(); ++s) {
        spec.layers.push_back(vote_similarity_layer(table.votes[s], table.actors[s]));
    }
    return spec;
}

}  // namespace ncpkit
