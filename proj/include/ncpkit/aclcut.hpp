#pragma once

// Approximate personalized PageRank by the Andersen-Chung-Lang push procedure,
// plus the exact PPR solve it approximates.

#include <cmath>
#include <deque>
#include <span>
#include <unordered_map>
#include <vector>

#include "graph.hpp"
#include "linalg.hpp"
#include "rank.hpp"

namespace ncpkit {

/// Converts the lazy-walk teleport constant to the non-lazy PPR parameter,
/// alpha = 1 - 2 alpha_lazy / (1 + alpha_lazy).
inline double alpha_from_lazy(double alpha_lazy) { return 1.0 - 2.0 * alpha_lazy / (1.0 + alpha_lazy); }

inline double lazy_from_alpha(double alpha) { return (1.0 - alpha) / (1.0 + alpha); }

struct PushParams {
    double epsilon = 1e-4;
    double alpha_lazy = 0.001;
    NodeId seed = 0;

    static PushParams from_alpha(double alpha, double epsilon, NodeId seed) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw GraphError("teleportation parameter alpha must lie in (0, 1)");
        }
        return {epsilon, lazy_from_alpha(alpha), seed};
    }

    [[nodiscard]] double alpha() const { return alpha_from_lazy(alpha_lazy); }

    void validate() const {
        if (!(alpha_lazy > 0.0 && alpha_lazy < 1.0)) {
            throw GraphError("lazy teleport constant must lie in (0, 1)");
        }
        if (!(epsilon > 0.0)) {
            throw GraphError("truncation parameter epsilon must be positive");
        }
    }
};

/// Solves p = alpha A D^{-1} p + (1 - alpha) s to residual norm 1e-10.
/// Returns every node (entries are strictly positive on connected graphs).
inline RankVector exact_ppr(const Graph& g, double alpha, std::span<const double> seed_distribution,
                            NodeId seed_tag = 0) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw GraphError("teleportation parameter alpha must lie in (0, 1)");
    }
    const auto n = g.num_nodes();
    if (seed_distribution.size() != n) {
        throw GraphError("seed distribution length does not match node count");
    }
    const auto inv_sqrt_d = linalg::inverse_sqrt_strengths(g);
    // symmetric form: (I - alpha D^{-1/2} A D^{-1/2}) q = (1 - alpha) D^{-1/2} s, p = D^{1/2} q
    Vec b(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        b[v] = (1.0 - alpha) * inv_sqrt_d[v] * seed_distribution[v];
    }
    auto apply = [&](std::span<const double> x, std::span<double> y) {
        linalg::normalized_adjacency_apply(g, inv_sqrt_d, x, y);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = x[i] - alpha * y[i];
        }
    };
    auto p_space_norm = [&](std::span<const double> r) {
        double s = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            s += g.strength(v) * r[v] * r[v];
        }
        return std::sqrt(s);
    };
    Vec q(n, 0.0);
    CgOptions opt;
    const double bnorm = p_space_norm(b);
    opt.rel_tol = bnorm > 0.0 ? std::min(1e-10, 1e-10 / bnorm) : 1e-10;
    conjugate_gradient(apply, b, q, {}, p_space_norm, opt);

    Vec p(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        const double d = g.strength(v);
        // a walker at a node without edges has nowhere to go
        p[v] = d > 0.0 ? std::sqrt(d) * q[v] : (1.0 - alpha) * seed_distribution[v];
    }
    return RankVector::from_dense(std::move(p), Method::aclcut, seed_tag, alpha);
}

inline RankVector exact_ppr(const Graph& g, double alpha, NodeId seed) {
    g.check_node(seed);
    Vec s(g.num_nodes(), 0.0);
    s[seed] = 1.0;
    return exact_ppr(g, alpha, s, seed);
}

namespace detail {
struct NoPushObserver {
    void operator()(const std::unordered_map<NodeId, double>&, const std::unordered_map<NodeId, double>&) const {}
};
}  // namespace detail

/// Push approximation of the lazy PPR vector seeded at params.seed. At
/// termination every residual satisfies r_u < epsilon d_u. The observer is
/// called after every push with the current (scores, residual) maps.
template <typename Observer = detail::NoPushObserver>
RankVector push_approx_ppr(const Graph& g, const PushParams& params, Observer&& observe = {}) {
    params.validate();
    g.check_node(params.seed);
    const double eps = params.epsilon;
    const double a = params.alpha_lazy;

    std::unordered_map<NodeId, double> p;
    std::unordered_map<NodeId, double> r;
    std::unordered_map<NodeId, char> queued;
    std::deque<NodeId> queue;
    r[params.seed] = 1.0;
    auto violates = [&](NodeId u, double ru) {
        const double du = g.strength(u);
        return du > 0.0 && ru >= eps * du;
    };
    if (violates(params.seed, 1.0)) {
        queue.push_back(params.seed);
        queued[params.seed] = 1;
    }
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        queued[u] = 0;
        const double ru = r[u];
        if (!violates(u, ru)) {
            continue;
        }
        const double du = g.strength(u);
        p[u] += a * ru;
        r[u] = 0.5 * (1.0 - a) * ru;
        const double share = 0.5 * (1.0 - a) * ru / du;
        const auto nb = g.neighbors(u);
        const auto w = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const NodeId v = nb[k];
            double& rv = r[v];
            rv += share * w[k];
            char& q = queued[v];
            if (!q && violates(v, rv)) {
                q = 1;
                queue.push_back(v);
            }
        }
        char& qu = queued[u];
        if (!qu && violates(u, r[u])) {
            qu = 1;
            queue.push_back(u);
        }
        observe(std::as_const(p), std::as_const(r));
    }

    RankVector out;
    out.method = Method::aclcut;
    out.seed = params.seed;
    out.param = eps;
    std::vector<std::pair<NodeId, double>> entries;
    for (const auto& [v, s] : p) {
        if (s > 0.0) {
            entries.emplace_back(v, s);
        }
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [v, s] : entries) {
        out.nodes.push_back(v);
        out.scores.push_back(s);
    }
    entries.clear();
    for (const auto& [v, s] : r) {
        if (s > 0.0) {
            entries.emplace_back(v, s);
        }
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [v, s] : entries) {
        out.residual_nodes.push_back(v);
        out.residual.push_back(s);
    }
    return out;
}

/// `count` log-spaced truncation values spanning [1/vol(G), 1/k_max], ascending.
inline std::vector<double> epsilon_grid(const Graph& g, std::size_t count) {
    if (count < 2) {
        throw GraphError("epsilon grid needs at least two points");
    }
    if (g.num_edges() < 2) {
        throw GraphError("epsilon grid is degenerate on graphs with fewer than two edges");
    }
    const double lo = 1.0 / g.total_volume();
    const double hi = 1.0 / g.max_strength();
    if (!(lo < hi)) {
        throw GraphError("epsilon grid interval is empty");
    }
    std::vector<double> out(count);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = std::exp(llo + t * (lhi - llo));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace ncpkit
