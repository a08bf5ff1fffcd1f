#pragma once

// Scalar community-quality measures and whole-graph diagnostics.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "linalg.hpp"

namespace ncpkit {

/// Largest node count for which exhaustive subset enumeration is allowed.
inline constexpr std::size_t kMaxExactNodes = 22;

/// phi(S) = vol(S, S^c) / min(vol(S), vol(S^c)).
inline double conductance(const Graph& g, const NodeSet& s) {
    if (s.empty() || s.size() >= g.num_nodes()) {
        throw GraphError("conductance is undefined for the empty set and the full node set");
    }
    // Evaluate on the side holding node 0 so that S and its complement round identically.
    const NodeSet side = s.contains(0) ? s : s.complement(g.num_nodes());
    const double vs = volume(g, side);
    const double denom = std::min(vs, g.total_volume() - vs);
    if (!(denom > 0.0)) {
        throw GraphError("conductance denominator is zero");
    }
    return std::min(1.0, cut(g, side) / denom);
}

/// h(S) = |E(S, S^c)| / |S| with weights read as edge multiplicities.
inline double edge_expansion(const Graph& g, const NodeSet& s) {
    if (s.empty()) {
        throw GraphError("edge expansion of the empty set");
    }
    return cut(g, s) / static_cast<double>(s.size());
}

namespace detail {

/// Visits every subset of [0, n-1) (node n-1 always outside) in Gray-code order,
/// passing (mask, |S|, vol(S), cut(S)). Unit weights stay exact in floating point.
template <typename Visit>
void enumerate_subsets(const Graph& g, Visit&& visit) {
    const auto n = g.num_nodes();
    if (n > kMaxExactNodes) {
        throw GraphError("exhaustive enumeration is limited to " + std::to_string(kMaxExactNodes) + " nodes");
    }
    if (n < 2) {
        return;
    }
    const std::uint32_t free_nodes = static_cast<std::uint32_t>(n - 1);
    std::uint32_t mask = 0;
    double vol = 0.0;
    double cutw = 0.0;
    std::size_t size = 0;
    const std::uint64_t total = std::uint64_t{1} << free_nodes;
    for (std::uint64_t step = 1; step < total; ++step) {
        const auto v = static_cast<NodeId>(std::countr_zero(step));
        const auto nb = g.neighbors(v);
        const auto w = g.weights(v);
        double to_set = 0.0;
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (mask & (std::uint32_t{1} << nb[k])) {
                to_set += w[k];
            }
        }
        const double d = g.strength(v);
        if (mask & (std::uint32_t{1} << v)) {
            mask &= ~(std::uint32_t{1} << v);
            cutw -= d - 2.0 * to_set;
            vol -= d;
            --size;
        } else {
            mask |= std::uint32_t{1} << v;
            cutw += d - 2.0 * to_set;
            vol += d;
            ++size;
        }
        visit(mask, size, vol, cutw);
    }
}

inline NodeSet mask_to_set(std::uint32_t mask) {
    std::vector<NodeId> out;
    while (mask) {
        out.push_back(static_cast<NodeId>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return NodeSet(std::move(out));
}

}  // namespace detail

/// Minimum edge expansion over sets of at most n/2 nodes, by enumeration.
inline double graph_expansion(const Graph& g) {
    const auto n = g.num_nodes();
    if (n < 2) {
        throw GraphError("graph expansion needs at least two nodes");
    }
    double best = kInfinity;
    detail::enumerate_subsets(g, [&](std::uint32_t, std::size_t size, double, double c) {
        const auto smaller = std::min(size, n - size);
        best = std::min(best, c / static_cast<double>(smaller));
    });
    return best;
}

struct ExactConductance {
    double value = kInfinity;
    NodeSet witness;
};

/// Global minimum of phi(S) over nonempty proper subsets, by enumeration.
inline ExactConductance graph_conductance_exact(const Graph& g) {
    ExactConductance best;
    const double total = g.total_volume();
    std::uint32_t best_mask = 0;
    detail::enumerate_subsets(g, [&](std::uint32_t mask, std::size_t, double vol, double c) {
        const double denom = std::min(vol, total - vol);
        if (denom > 0.0 && c / denom < best.value) {
            best.value = c / denom;
            best_mask = mask;
        }
    });
    best.witness = detail::mask_to_set(best_mask);
    return best;
}

namespace detail {

/// Best prefix conductance of `order` inside g (order must list every node).
inline double best_prefix_conductance(const Graph& g, const std::vector<NodeId>& order) {
    std::vector<char> in(g.num_nodes(), 0);
    double vol = 0.0;
    double cutw = 0.0;
    double best = kInfinity;
    const double total = g.total_volume();
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const auto v = order[i];
        const auto nb = g.neighbors(v);
        const auto w = g.weights(v);
        double to_set = 0.0;
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (in[nb[k]]) {
                to_set += w[k];
            }
        }
        in[v] = 1;
        cutw += g.strength(v) - 2.0 * to_set;
        vol += g.strength(v);
        const double denom = std::min(vol, total - vol);
        if (denom > 0.0) {
            best = std::min(best, cutw / denom);
        }
    }
    return best;
}

}  // namespace detail

enum class InternalMode { automatic, exact, spectral };

/// Conductance of the subgraph induced by C, taken in isolation. Returns
/// nullopt for |C| < 2. Disconnected induced subgraphs score 0. The spectral
/// mode sweeps the Fiedler vector and is an upper bound on the exact value.
inline std::optional<double> internal_conductance(const Graph& g, const NodeSet& c,
                                                  InternalMode mode = InternalMode::automatic) {
    g.check_set(c);
    if (c.size() < 2) {
        return std::nullopt;
    }
    const auto sub = induced_subgraph(g, c);
    if (!is_connected(sub.graph)) {
        return 0.0;
    }
    if (mode == InternalMode::automatic) {
        mode = c.size() <= kMaxExactNodes ? InternalMode::exact : InternalMode::spectral;
    }
    if (mode == InternalMode::exact) {
        return graph_conductance_exact(sub.graph).value;
    }
    LanczosOptions opt;
    opt.tol = 1e-6;
    opt.krylov_dim = 40;
    const auto fiedler = smallest_nontrivial_eigenpair(sub.graph, opt);
    std::vector<NodeId> order(sub.graph.num_nodes());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::vector<double> key(order.size());
    for (NodeId v = 0; v < key.size(); ++v) {
        key[v] = fiedler.vector[v] / std::sqrt(sub.graph.strength(v));
    }
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return key[a] > key[b]; });
    return detail::best_prefix_conductance(sub.graph, order);
}

/// Phi(C) = phi(C) / phi_in(C). Infinity when phi_in = 0 < phi; nullopt when
/// phi_in is undefined or both terms vanish.
inline std::optional<double> conductance_ratio(double phi, std::optional<double> phi_in) {
    if (!phi_in) {
        return std::nullopt;
    }
    if (*phi_in == 0.0) {
        if (phi == 0.0) {
            return std::nullopt;
        }
        return kInfinity;
    }
    return phi / *phi_in;
}

inline std::optional<double> conductance_ratio(const Graph& g, const NodeSet& c,
                                               InternalMode mode = InternalMode::automatic) {
    return conductance_ratio(conductance(g, c), internal_conductance(g, c, mode));
}

struct QualityReport {
    double conductance = 0.0;
    std::optional<double> internal_conductance;
    std::optional<double> ratio;
    std::size_t size = 0;
    double volume = 0.0;
    double cut = 0.0;
};

inline QualityReport evaluate(const Graph& g, const NodeSet& c,
                              InternalMode mode = InternalMode::automatic) {
    QualityReport r;
    r.size = c.size();
    r.volume = volume(g, c);
    r.cut = cut(g, c);
    r.conductance = conductance(g, c);
    r.internal_conductance = internal_conductance(g, c, mode);
    r.ratio = conductance_ratio(r.conductance, r.internal_conductance);
    return r;
}

/// Weighted local clustering coefficient with weights scaled by the global
/// maximum; nodes of degree < 2 score 0.
inline double clustering_coefficient(const Graph& g, NodeId i) {
    g.check_node(i);
    const auto ki = g.degree(i);
    if (ki < 2) {
        return 0.0;
    }
    const double wmax = g.max_weight();
    const auto nb = g.neighbors(i);
    const auto wi = g.weights(i);
    double sum = 0.0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
        const auto j = nb[a];
        const auto nbj = g.neighbors(j);
        const auto wj = g.weights(j);
        // both neighbour lists are sorted: merge to find common neighbours k
        std::size_t p = 0;
        std::size_t q = 0;
        while (p < nb.size() && q < nbj.size()) {
            if (nb[p] < nbj[q]) {
                ++p;
            } else if (nbj[q] < nb[p]) {
                ++q;
            } else {
                sum += std::cbrt((wi[a] / wmax) * (wi[p] / wmax) * (wj[q] / wmax));
                ++p;
                ++q;
            }
        }
    }
    return sum / (static_cast<double>(ki) * static_cast<double>(ki - 1));
}

inline double mean_clustering_coefficient(const Graph& g) {
    if (g.num_nodes() == 0) {
        return 0.0;
    }
    double s = 0.0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        s += clustering_coefficient(g, i);
    }
    return s / static_cast<double>(g.num_nodes());
}

/// Summary row: n, m, mean strength, lambda_2, mean clustering coefficient.
struct GraphStats {
    std::size_t n = 0;
    std::size_t m = 0;
    double mean_strength = 0.0;
    double lambda2 = 0.0;
    double mean_clustering = 0.0;
};

inline GraphStats graph_stats(const Graph& g, double tol = 1e-8) {
    GraphStats s;
    s.n = g.num_nodes();
    s.m = g.num_edges();
    s.mean_strength = g.total_volume() / static_cast<double>(s.n);
    s.lambda2 = lambda2(g, tol);
    s.mean_clustering = mean_clustering_coefficient(g);
    return s;
}

}  // namespace ncpkit
