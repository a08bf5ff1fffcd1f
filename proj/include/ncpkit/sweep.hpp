#pragma once

// Sweep cuts of ranking vectors and network community profiles (NCPs): the
// size-indexed lower envelope of sweep-set conductance over seeds and
// parameters, together with the conductance-ratio profile of its witnesses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "aclcut.hpp"
#include "egonet.hpp"
#include "graph.hpp"
#include "movcut.hpp"
#include "parallel.hpp"
#include "quality.hpp"
#include "random.hpp"
#include "rank.hpp"

namespace ncpkit {

struct SweepOptions {
    /// Discard sweep sets whose induced subgraph is disconnected.
    bool connected_only = false;
    /// Discard sweep sets with volume above this.
    std::optional<double> volume_cap;
    /// Sort by score / strength instead of raw score.
    bool degree_normalized = false;
    /// Also record the points removed by connected_only.
    bool keep_unfiltered = false;
};

struct SweepPoint {
    std::size_t size = 0;
    double volume = 0.0;
    double cut = 0.0;
    double conductance = 0.0;
    bool connected = true;
};

struct SweepResult {
    /// Support nodes by descending score; ties by ascending index.
    std::vector<NodeId> ordered_nodes;
    /// One point per retained sweep set S_t, sizes strictly increasing.
    std::vector<SweepPoint> curve;
    /// Every evaluated sweep set regardless of connectivity (keep_unfiltered only).
    std::vector<SweepPoint> unfiltered_curve;
    NodeSet best;
    double best_conductance = kInfinity;
    bool connected_filtered = false;

    /// The sweep set made of the first `size` ordered nodes.
    [[nodiscard]] NodeSet prefix(std::size_t size) const {
        return NodeSet(std::vector<NodeId>(ordered_nodes.begin(),
                                           ordered_nodes.begin() + static_cast<std::ptrdiff_t>(size)));
    }
};

namespace detail {

struct DisjointSets {
    std::vector<NodeId> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), NodeId{0}); }
    NodeId find(NodeId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

}  // namespace detail

/// Evaluates every sweep set {i : score_i >= t} of the ranking. Equal scores
/// enter together. The full node set is never evaluated.
inline SweepResult sweep(const Graph& g, const RankVector& rank, const SweepOptions& options = {}) {
    SweepResult out;
    out.connected_filtered = options.connected_only;
    const auto support = rank.nodes.size();
    if (support == 0) {
        return out;
    }
    std::vector<double> key(support);
    for (std::size_t k = 0; k < support; ++k) {
        key[k] = rank.scores[k];
        if (options.degree_normalized) {
            const double d = g.strength(rank.nodes[k]);
            key[k] = d > 0.0 ? key[k] / d : 0.0;
        }
    }
    std::vector<std::size_t> idx(support);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b]) {
            return key[a] > key[b];
        }
        return rank.nodes[a] < rank.nodes[b];
    });
    out.ordered_nodes.reserve(support);
    for (auto k : idx) {
        out.ordered_nodes.push_back(rank.nodes[k]);
    }

    const auto n = g.num_nodes();
    const double total = g.total_volume();
    std::vector<char> in(n, 0);
    detail::DisjointSets dsu(n);
    std::size_t components = 0;
    double vol = 0.0;
    double cutw = 0.0;
    std::size_t best_size = 0;
    for (std::size_t pos = 0; pos < support; ++pos) {
        const NodeId v = out.ordered_nodes[pos];
        const auto nb = g.neighbors(v);
        const auto w = g.weights(v);
        double to_set = 0.0;
        ++components;
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (in[nb[k]]) {
                to_set += w[k];
                if (dsu.unite(v, nb[k])) {
                    --components;
                }
            }
        }
        in[v] = 1;
        cutw += g.strength(v) - 2.0 * to_set;
        vol += g.strength(v);

        const bool group_ends = pos + 1 == support || key[idx[pos + 1]] != key[idx[pos]];
        if (!group_ends) {
            continue;
        }
        const std::size_t size = pos + 1;
        if (size >= n) {
            break;
        }
        const double denom = std::min(vol, total - vol);
        if (!(denom > 0.0)) {
            continue;
        }
        if (options.volume_cap && vol > *options.volume_cap) {
            continue;
        }
        // cut can drift below zero by rounding when the set closes off a component
        const SweepPoint point{size, vol, std::max(cutw, 0.0), std::max(cutw, 0.0) / denom, components == 1};
        if (options.keep_unfiltered) {
            out.unfiltered_curve.push_back(point);
        }
        if (options.connected_only && !point.connected) {
            continue;
        }
        out.curve.push_back(point);
        if (point.conductance < out.best_conductance) {
            out.best_conductance = point.conductance;
            best_size = size;
        }
    }
    if (best_size > 0) {
        out.best = out.prefix(best_size);
    }
    return out;
}

/// Best community found at one size, with the run that produced it.
struct NcpEntry {
    double conductance = kInfinity;
    NodeSet witness;
    Method method = Method::aclcut;
    NodeId seed = 0;
    double param = std::nan("");
    std::optional<double> internal_conductance;
    std::optional<double> ratio;

    [[nodiscard]] bool filled() const noexcept { return !witness.empty(); }
};

namespace detail {

/// Total order used to pick between equal-conductance candidates, so that
/// envelope merges are order independent.
inline bool prefer(double phi, const NodeSet& witness, Method method, NodeId seed, double param,
                   const NcpEntry& incumbent) {
    if (!incumbent.filled()) {
        return true;
    }
    if (phi != incumbent.conductance) {
        return phi < incumbent.conductance;
    }
    if (witness.members() != incumbent.witness.members()) {
        return witness.members() < incumbent.witness.members();
    }
    if (method != incumbent.method) {
        return method < incumbent.method;
    }
    if (seed != incumbent.seed) {
        return seed < incumbent.seed;
    }
    return param < incumbent.param;
}

}  // namespace detail

/// Size-indexed minimum-conductance envelope over sizes 1..floor(n/2).
class NcpCurve {
public:
    NcpCurve() = default;
    explicit NcpCurve(std::size_t n) : n_(n), entries_(n / 2 + 1) {}

    [[nodiscard]] std::size_t num_nodes() const noexcept { return n_; }
    [[nodiscard]] std::size_t max_size() const noexcept { return n_ / 2; }
    [[nodiscard]] const NcpEntry& at(std::size_t size) const { return entries_.at(size); }
    [[nodiscard]] NcpEntry& at(std::size_t size) { return entries_.at(size); }

    /// Conductance at `size`, infinity when nothing was found.
    [[nodiscard]] double conductance(std::size_t size) const { return entries_.at(size).conductance; }

    /// Sizes with a witness, ascending.
    [[nodiscard]] std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 1; k < entries_.size(); ++k) {
            if (entries_[k].filled()) {
                out.push_back(k);
            }
        }
        return out;
    }

    /// Offers every point of a sweep curve.
    void offer(const SweepResult& result, std::span<const SweepPoint> points, Method method, NodeId seed,
               double param) {
        for (const auto& pt : points) {
            if (pt.size > max_size()) {
                continue;
            }
            auto& cur = entries_[pt.size];
            if (cur.filled() && pt.conductance > cur.conductance) {
                continue;
            }
            NodeSet witness = result.prefix(pt.size);
            if (detail::prefer(pt.conductance, witness, method, seed, param, cur)) {
                cur = NcpEntry{pt.conductance, std::move(witness), method, seed, param, {}, {}};
            }
        }
    }

    void offer(const SweepResult& result, Method method, NodeId seed, double param) {
        offer(result, result.curve, method, seed, param);
    }

    /// Pointwise minimum with another curve over the same graph.
    void merge(const NcpCurve& other) {
        if (entries_.empty()) {
            *this = other;
            return;
        }
        for (std::size_t k = 1; k < entries_.size() && k < other.entries_.size(); ++k) {
            const auto& o = other.entries_[k];
            if (o.filled() && detail::prefer(o.conductance, o.witness, o.method, o.seed, o.param, entries_[k])) {
                entries_[k] = o;
            }
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<NcpEntry> entries_;
};

/// Which dynamics to run and over which parameter values.
struct MethodConfig {
    Method method = Method::aclcut;
    /// epsilon values (aclcut) or alpha values (movcut); empty selects the
    /// default 20-point grid. Ignored by egonet.
    std::vector<double> grid;
    double alpha_lazy = 0.001;
    LengthMode lengths = LengthMode::inverse_weight;
    /// Community-size limit c for movcut sweeps.
    std::optional<double> volume_cap;
};

inline constexpr std::size_t kDefaultGridCount = 20;

/// Binds a MethodConfig to a graph: resolves default grids and owns the
/// per-graph MovCut state.
class MethodRunner {
public:
    MethodRunner(const Graph& g, MethodConfig cfg, std::optional<double> known_lambda2 = {})
        : g_(&g), cfg_(std::move(cfg)) {
        switch (cfg_.method) {
            case Method::aclcut:
                if (cfg_.grid.empty()) {
                    cfg_.grid = epsilon_grid(g, kDefaultGridCount);
                }
                break;
            case Method::movcut:
                mov_.emplace(g, known_lambda2);
                if (cfg_.grid.empty()) {
                    cfg_.grid = mov_->alpha_grid(kDefaultGridCount);
                }
                break;
            case Method::egonet:
                cfg_.grid = {std::nan("")};
                break;
        }
    }

    [[nodiscard]] const MethodConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] std::size_t grid_size() const noexcept { return cfg_.grid.size(); }
    [[nodiscard]] double param(std::size_t k) const { return cfg_.grid[k]; }
    [[nodiscard]] Method method() const noexcept { return cfg_.method; }

    [[nodiscard]] RankVector run(NodeId seed, std::size_t param_index) const {
        const double p = cfg_.grid[param_index];
        switch (cfg_.method) {
            case Method::aclcut:
                return push_approx_ppr(*g_, PushParams{p, cfg_.alpha_lazy, seed});
            case Method::movcut:
                return mov_->rank(MovParams::from_alpha(p, seed, cfg_.volume_cap));
            case Method::egonet:
                return egorank(*g_, seed, cfg_.lengths);
        }
        return {};
    }

    [[nodiscard]] SweepOptions sweep_options(SweepOptions base) const {
        if (cfg_.method == Method::movcut && cfg_.volume_cap) {
            base.volume_cap = cfg_.volume_cap;
        }
        return base;
    }

private:
    const Graph* g_;
    MethodConfig cfg_;
    std::optional<MovCut> mov_;
};

/// Envelope over every sweep set of one seed across the method's grid.
inline NcpCurve local_ncp(const Graph& g, const MethodConfig& cfg, NodeId seed, const SweepOptions& options = {},
                          std::optional<double> known_lambda2 = {}) {
    g.check_node(seed);
    MethodRunner runner(g, cfg, known_lambda2);
    NcpCurve curve(g.num_nodes());
    const auto sopt = runner.sweep_options(options);
    for (std::size_t k = 0; k < runner.grid_size(); ++k) {
        const auto rank = runner.run(seed, k);
        const auto result = sweep(g, rank, sopt);
        curve.offer(result, runner.method(), seed, runner.param(k));
    }
    return curve;
}

/// Seed-sampling budget for global NCPs.
struct CoverageBudget {
    /// Stop once every node sits in at least this many best communities.
    std::size_t coverage = 10;
    std::uint64_t rng_seed = 42;
    /// Upper bound on seeds per parameter value; 0 means all nodes.
    std::size_t max_seeds = 0;
    /// egonet has no size parameter; the default runs it from every node.
    bool egonet_all_seeds = true;
    std::size_t threads = 1;
    /// Retain the best community of every run (association matrices).
    bool collect_samples = false;
};

struct GlobalNcp {
    NcpCurve curve;
    /// Envelope that also admits disconnected sweep sets (connected_only runs).
    std::optional<NcpCurve> unfiltered;
    /// Best community per run, in run order (collect_samples only).
    std::vector<NodeSet> samples;
    std::size_t runs = 0;
};

/// Global NCP: for each method and parameter value, seeds are drawn uniformly
/// without replacement until every node has been covered `coverage` times by a
/// run's best community or all nodes have been used. The stop rule is checked
/// after each seed in draw order, so the output does not depend on `threads`.
inline GlobalNcp global_ncp(const Graph& g, std::span<const MethodConfig> methods, const CoverageBudget& budget = {},
                            const SweepOptions& options = {}, std::optional<double> known_lambda2 = {}) {
    const auto n = g.num_nodes();
    GlobalNcp out;
    out.curve = NcpCurve(n);
    SweepOptions sopt_base = options;
    if (options.connected_only) {
        sopt_base.keep_unfiltered = true;
        out.unfiltered = NcpCurve(n);
    }
    constexpr std::size_t kBatch = 64;
    for (const auto& cfg : methods) {
        MethodRunner runner(g, cfg, known_lambda2);
        const auto sopt = runner.sweep_options(sopt_base);
        for (std::size_t pk = 0; pk < runner.grid_size(); ++pk) {
            Rng rng(derive_seed(budget.rng_seed, static_cast<std::uint64_t>(runner.method()), pk));
            std::vector<NodeId> order(n);
            std::iota(order.begin(), order.end(), NodeId{0});
            shuffle(std::span<NodeId>(order), rng);
            const bool all_seeds = runner.method() == Method::egonet && budget.egonet_all_seeds;
            std::size_t limit = n;
            if (budget.max_seeds > 0 && !all_seeds) {
                limit = std::min(limit, budget.max_seeds);
            }
            std::vector<std::size_t> covered(n, 0);
            std::size_t satisfied = budget.coverage == 0 ? n : 0;
            bool stop = false;
            for (std::size_t start = 0; start < limit && !stop; start += kBatch) {
                const auto count = std::min(kBatch, limit - start);
                std::vector<SweepResult> results(count);
                parallel_for(count, budget.threads, [&](std::size_t i) {
                    const auto rank = runner.run(order[start + i], pk);
                    results[i] = sweep(g, rank, sopt);
                });
                for (std::size_t i = 0; i < count; ++i) {
                    const auto& res = results[i];
                    const NodeId seed = order[start + i];
                    out.curve.offer(res, runner.method(), seed, runner.param(pk));
                    if (out.unfiltered) {
                        out.unfiltered->offer(res, res.unfiltered_curve, runner.method(), seed, runner.param(pk));
                    }
                    ++out.runs;
                    if (budget.collect_samples && !res.best.empty()) {
                        out.samples.push_back(res.best);
                    }
                    for (auto v : res.best) {
                        if (++covered[v] == budget.coverage) {
                            ++satisfied;
                        }
                    }
                    if (!all_seeds && satisfied == n) {
                        stop = true;
                        break;
                    }
                }
            }
        }
    }
    return out;
}

inline GlobalNcp global_ncp(const Graph& g, const MethodConfig& method, const CoverageBudget& budget = {},
                            const SweepOptions& options = {}, std::optional<double> known_lambda2 = {}) {
    return global_ncp(g, std::span<const MethodConfig>(&method, 1), budget, options, known_lambda2);
}

/// Fills internal conductance and conductance ratio for every witness.
inline void annotate_witnesses(const Graph& g, NcpCurve& curve, InternalMode mode = InternalMode::automatic) {
    for (auto k : curve.sizes()) {
        auto& e = curve.at(k);
        e.internal_conductance = internal_conductance(g, e.witness, mode);
        e.ratio = conductance_ratio(e.conductance, e.internal_conductance);
    }
}

struct CrpPoint {
    std::size_t size = 0;
    double conductance = 0.0;
    double internal_conductance = 0.0;
    /// Infinity when the witness is internally disconnected.
    double ratio = 0.0;
};

/// Conductance-ratio profile of an annotated NCP; sizes whose ratio is
/// undefined are omitted.
inline std::vector<CrpPoint> crp(const NcpCurve& curve) {
    std::vector<CrpPoint> out;
    for (auto k : curve.sizes()) {
        const auto& e = curve.at(k);
        if (!e.ratio || !e.internal_conductance) {
            continue;
        }
        out.push_back({k, e.conductance, *e.internal_conductance, *e.ratio});
    }
    return out;
}

}  // namespace ncpkit
