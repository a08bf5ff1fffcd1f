#pragma once

// Rank-correlation comparison of the three dynamics on the support of the
// push approximation, aggregated over sampled seeds.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aclcut.hpp"
#include "egonet.hpp"
#include "graph.hpp"
#include "movcut.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace ncpkit {

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> x) {
    const auto n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[idx[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

/// Pearson correlation; nullopt when either vector is constant.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw GraphError("correlation needs vectors of equal length");
    }
    const auto n = x.size();
    if (n < 2) {
        return std::nullopt;
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        return std::nullopt;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman correlation with tie-averaged ranks; nullopt for constant input.
inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw GraphError("correlation needs vectors of equal length");
    }
    if (x.size() < 2) {
        return std::nullopt;
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

enum class MethodPair { aclcut_movcut = 0, aclcut_egonet = 1, movcut_egonet = 2 };

inline constexpr std::array<MethodPair, 3> kMethodPairs{MethodPair::aclcut_movcut, MethodPair::aclcut_egonet,
                                                        MethodPair::movcut_egonet};

inline std::string_view pair_name(MethodPair p) {
    switch (p) {
        case MethodPair::aclcut_movcut:
            return "A-M";
        case MethodPair::aclcut_egonet:
            return "A-E";
        case MethodPair::movcut_egonet:
            return "M-E";
    }
    return "?";
}

struct CellSummary {
    double max = std::nan("");
    double mean = std::nan("");
    double min = std::nan("");
    std::size_t valid = 0;
};

struct ComparisonCell {
    double epsilon = 0.0;
    double alpha = 0.0;
    /// Set when alpha is outside the range both dynamics accept.
    bool skipped = false;
    /// Per pair, one value per seed whose correlation was defined.
    std::array<std::vector<double>, 3> values;

    [[nodiscard]] CellSummary summary(MethodPair p) const {
        const auto& v = values[static_cast<std::size_t>(p)];
        CellSummary s;
        s.valid = v.size();
        if (!v.empty()) {
            s.max = *std::max_element(v.begin(), v.end());
            s.min = *std::min_element(v.begin(), v.end());
            s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        }
        return s;
    }
};

struct ComparisonGrid {
    std::vector<double> epsilons;
    std::vector<double> alphas;
    std::vector<NodeId> seeds;
    /// Row-major over (epsilon, alpha).
    std::vector<ComparisonCell> cells;

    [[nodiscard]] const ComparisonCell& cell(std::size_t ei, std::size_t ai) const {
        return cells.at(ei * alphas.size() + ai);
    }
};

struct CompareOptions {
    /// Rank only within the push support; otherwise ranks are taken over all
    /// nodes and then restricted.
    bool rerank_within_support = true;
    LengthMode lengths = LengthMode::inverse_weight;
    std::size_t threads = 1;
};

inline constexpr std::array<double, 4> kDefaultCompareEpsilons{1e-3, 1e-4, 1e-5, 1e-6};
inline constexpr std::array<double, 5> kDefaultCompareAlphas{0.6, 0.7, 0.8, 0.9, 0.99};

/// `count` distinct nodes drawn uniformly (all nodes when count >= n), in draw order.
inline std::vector<NodeId> sample_seeds(std::size_t n, std::size_t count, std::uint64_t rng_seed) {
    std::vector<NodeId> nodes(n);
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    Rng rng(derive_seed(rng_seed, 0x5345454453));
    shuffle(std::span<NodeId>(nodes), rng);
    nodes.resize(std::min(count, n));
    return nodes;
}

namespace detail {

inline std::optional<double> restricted_spearman(const std::vector<NodeId>& support, const std::vector<double>& x,
                                                 const std::vector<double>& y, bool rerank) {
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(support.size());
    ys.reserve(support.size());
    if (rerank) {
        for (auto v : support) {
            xs.push_back(x[v]);
            ys.push_back(y[v]);
        }
        return spearman(xs, ys);
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    for (auto v : support) {
        xs.push_back(rx[v]);
        ys.push_back(ry[v]);
    }
    return pearson(xs, ys);
}

}  // namespace detail

/// For every seed and (epsilon, alpha): the push vector with teleportation
/// alpha and truncation epsilon, the MovCut vector at gamma = (alpha - 1) /
/// alpha and the EgoRank vector, compared pairwise on the push support.
inline ComparisonGrid compare_methods(const Graph& g, std::span<const NodeId> seeds, std::span<const double> epsilons,
                                      std::span<const double> alphas, const CompareOptions& options = {},
                                      std::optional<double> known_lambda2 = {}) {
    if (epsilons.empty() || alphas.empty()) {
        throw GraphError("comparison grids must be nonempty");
    }
    const auto n = g.num_nodes();
    const MovCut mov(g, known_lambda2);
    ComparisonGrid grid;
    grid.epsilons.assign(epsilons.begin(), epsilons.end());
    grid.alphas.assign(alphas.begin(), alphas.end());
    grid.seeds.assign(seeds.begin(), seeds.end());
    const auto ne = epsilons.size();
    const auto na = alphas.size();
    std::vector<char> usable(na);
    for (std::size_t ai = 0; ai < na; ++ai) {
        const double a = alphas[ai];
        usable[ai] = a > 0.0 && a < 1.0 && gamma_from_alpha(a) < mov.lambda2();
    }
    using PerSeed = std::vector<std::array<std::optional<double>, 3>>;
    std::vector<PerSeed> per_seed(seeds.size(), PerSeed(ne * na));
    parallel_for(seeds.size(), options.threads, [&](std::size_t si) {
        const NodeId s = seeds[si];
        const auto ego = egorank(g, s, options.lengths).dense(n);
        for (std::size_t ai = 0; ai < na; ++ai) {
            if (!usable[ai]) {
                continue;
            }
            const auto mc = mov.rank(MovParams::from_alpha(alphas[ai], s)).dense(n);
            for (std::size_t ei = 0; ei < ne; ++ei) {
                const auto push = push_approx_ppr(g, PushParams::from_alpha(alphas[ai], epsilons[ei], s));
                const auto acl = push.dense(n);
                std::vector<NodeId> support;
                for (std::size_t k = 0; k < push.nodes.size(); ++k) {
                    if (push.scores[k] > 0.0) {
                        support.push_back(push.nodes[k]);
                    }
                }
                auto& slot = per_seed[si][ei * na + ai];
                slot[0] = detail::restricted_spearman(support, acl, mc, options.rerank_within_support);
                slot[1] = detail::restricted_spearman(support, acl, ego, options.rerank_within_support);
                slot[2] = detail::restricted_spearman(support, mc, ego, options.rerank_within_support);
            }
        }
    });
    grid.cells.resize(ne * na);
    for (std::size_t ei = 0; ei < ne; ++ei) {
        for (std::size_t ai = 0; ai < na; ++ai) {
            auto& c = grid.cells[ei * na + ai];
            c.epsilon = epsilons[ei];
            c.alpha = alphas[ai];
            c.skipped = !usable[ai];
            for (const auto& ps : per_seed) {
                for (std::size_t p = 0; p < 3; ++p) {
                    if (const auto& v = ps[ei * na + ai][p]) {
                        c.values[p].push_back(*v);
                    }
                }
            }
        }
    }
    return grid;
}

}  // namespace ncpkit
