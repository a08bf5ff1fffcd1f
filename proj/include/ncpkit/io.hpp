#pragma once

// Text formats: edge lists, community files, NCP/CRP tables and association
// matrix exports.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "association.hpp"
#include "graph.hpp"
#include "sweep.hpp"

namespace ncpkit {

/// Malformed input text.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kUndefinedMarker = "NA";
inline constexpr std::string_view kInfinityMarker = "inf";

/// 12 significant digits; infinity and NaN use the table markers.
inline std::string format_number(double x) {
    if (std::isnan(x)) {
        return std::string(kUndefinedMarker);
    }
    if (std::isinf(x)) {
        return x > 0 ? std::string(kInfinityMarker) : "-" + std::string(kInfinityMarker);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string format_number(const std::optional<double>& x) {
    return x ? format_number(*x) : std::string(kUndefinedMarker);
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        const auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline bool parse_double(std::string_view s, double& out) {
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    return in;
}

}  // namespace detail

/// Reads `u v [w]` lines; `#` starts a comment line. When every node token is
/// an integer the identifiers are ordered numerically, otherwise by first
/// appearance.
inline Graph read_edge_list(std::istream& in) {
    std::vector<WeightedEdge<std::string>> named;
    std::vector<WeightedEdge<std::int64_t>> numbered;
    bool all_integer = true;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = detail::split_ws(line);
        if (tok.empty() || tok.front().front() == '#') {
            continue;
        }
        if (tok.size() < 2 || tok.size() > 3) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 'u v [w]'");
        }
        double w = 1.0;
        if (tok.size() == 3 && !detail::parse_double(tok[2], w)) {
            throw ParseError("line " + std::to_string(lineno) + ": bad weight '" + std::string(tok[2]) + "'");
        }
        std::int64_t a = 0;
        std::int64_t b = 0;
        if (all_integer && detail::parse_int(tok[0], a) && detail::parse_int(tok[1], b)) {
            numbered.push_back({a, b, w});
        } else {
            all_integer = false;
        }
        named.push_back({std::string(tok[0]), std::string(tok[1]), w});
    }
    try {
        if (all_integer) {
            return build_graph(std::span<const WeightedEdge<std::int64_t>>(numbered));
        }
        return build_graph(std::span<const WeightedEdge<std::string>>(named));
    } catch (const GraphError& e) {
        throw ParseError(e.what());
    }
}

inline Graph read_edge_list(const std::string& path) {
    auto in = detail::open_input(path);
    return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    for (const auto& e : g.edge_list()) {
        out << g.label(e.u) << ' ' << g.label(e.v) << ' ' << format_number(e.w) << '\n';
    }
}

/// `node community_id` lines, nodes in index order.
inline void write_communities(std::ostream& out, const Graph& g, const std::vector<std::uint32_t>& community) {
    for (NodeId v = 0; v < community.size(); ++v) {
        out << g.label(v) << ' ' << community[v] << '\n';
    }
}

/// Reads `node community_id` lines into node sets, communities ordered by
/// first appearance. Unknown nodes are an error.
inline std::vector<NodeSet> read_communities(std::istream& in, const Graph& g) {
    std::vector<std::vector<NodeId>> groups;
    std::unordered_map<std::string, std::size_t> index;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = detail::split_ws(line);
        if (tok.empty() || tok.front().front() == '#') {
            continue;
        }
        if (tok.size() != 2) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 'node community_id'");
        }
        const auto v = g.find_label(std::string(tok[0]));
        if (!v) {
            throw ParseError("line " + std::to_string(lineno) + ": unknown node '" + std::string(tok[0]) + "'");
        }
        auto [it, inserted] = index.try_emplace(std::string(tok[1]), groups.size());
        if (inserted) {
            groups.emplace_back();
        }
        groups[it->second].push_back(*v);
    }
    std::vector<NodeSet> out;
    out.reserve(groups.size());
    for (auto& grp : groups) {
        out.emplace_back(std::move(grp));
    }
    return out;
}

/// One row per size with a witness.
inline std::size_t write_ncp_csv(std::ostream& out, const Graph& g, const NcpCurve& curve) {
    out << "size,conductance,internal_conductance,ratio,method,seed,param\n";
    std::size_t rows = 0;
    for (auto k : curve.sizes()) {
        const auto& e = curve.at(k);
        out << k << ',' << format_number(e.conductance) << ',' << format_number(e.internal_conductance) << ','
            << format_number(e.ratio) << ',' << method_name(e.method) << ',' << g.label(e.seed) << ','
            << format_number(e.param) << '\n';
        ++rows;
    }
    return rows;
}

inline std::size_t write_crp_csv(std::ostream& out, const std::vector<CrpPoint>& points) {
    out << "size,conductance,internal_conductance,ratio\n";
    for (const auto& p : points) {
        out << p.size << ',' << format_number(p.conductance) << ',' << format_number(p.internal_conductance) << ','
            << format_number(p.ratio) << '\n';
    }
    return points.size();
}

/// Coordinate-format `i j value` lines for the nonzero upper triangle.
inline std::size_t write_association(std::ostream& out, const Graph& g, const AssociationMatrix& a) {
    std::size_t rows = 0;
    for (const auto& [i, j, v] : a.nonzero_entries()) {
        out << g.label(i) << ' ' << g.label(j) << ' ' << format_number(v) << '\n';
        ++rows;
    }
    return rows;
}

inline void write_permutation(std::ostream& out, const Graph& g, const std::vector<NodeId>& order) {
    for (auto v : order) {
        out << g.label(v) << '\n';
    }
}

}  // namespace ncpkit
