#pragma once

// LFR benchmark graphs: power-law degrees and community sizes, with each node
// sending a fraction mu of its edges outside its planted community.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "sweep.hpp"

namespace ncpkit {

/// A parameter combination for which no graph can be built.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LfrParams {
    std::size_t n = 1000;
    /// Degree exponent, P(k) ~ k^tau1.
    double tau1 = -2.0;
    /// Community-size exponent, P(s) ~ s^tau2.
    double tau2 = -3.0;
    double k_mean = 10.0;
    std::int64_t k_max = 100;
    std::int64_t c_min = 10;
    std::int64_t c_max = 50;
    double mu = 0.1;
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (n < 2) {
            throw GraphError("LFR needs at least two nodes");
        }
        if (!(tau1 < 0.0) || !(tau2 < 0.0)) {
            throw GraphError("LFR exponents must be negative");
        }
        if (c_min < 2 || c_max < c_min) {
            throw GraphError("LFR community bounds need 2 <= c_min <= c_max");
        }
        if (k_max < 1 || !(k_mean >= 1.0) || k_mean > static_cast<double>(k_max)) {
            throw GraphError("LFR degrees need 1 <= k_mean <= k_max");
        }
        if (!(mu >= 0.0 && mu <= 1.0)) {
            throw GraphError("mixing parameter must lie in [0, 1]");
        }
        if (static_cast<std::int64_t>(n) < c_min) {
            throw InfeasibleError("n is smaller than the minimum community size");
        }
    }

    /// Largest degree whose intra-community share fits in a community of
    /// c_max nodes: floor((c_max - 1) / (1 - mu)), capped at k_max.
    [[nodiscard]] std::int64_t effective_k_max() const {
        if (mu >= 1.0) {
            return k_max;
        }
        const auto fit = static_cast<std::int64_t>(std::floor(static_cast<double>(c_max - 1) / (1.0 - mu) + 1e-9));
        return std::min(k_max, fit);
    }
};

/// Parameter sets of the three LFR families studied in the NCP sweeps.
inline LfrParams lfr_preset(std::string_view name) {
    LfrParams p;
    if (name == "fig17a") {
        p.k_mean = 10.0;
        p.k_max = 100;
        p.tau1 = -2.0;
        p.tau2 = -3.0;
        p.c_min = 10;
        p.c_max = 50;
    } else if (name == "fig17b") {
        p.k_mean = 20.0;
        p.k_max = 50;
        p.tau1 = -2.0;
        p.tau2 = -1.0;
        p.c_min = 10;
        p.c_max = 50;
    } else if (name == "fig17c") {
        p.k_mean = 20.0;
        p.k_max = 50;
        p.tau1 = -2.0;
        p.tau2 = -1.0;
        p.c_min = 20;
        p.c_max = 100;
    } else {
        throw GraphError("unknown LFR preset '" + std::string(name) + "'");
    }
    return p;
}

namespace detail {

/// Cumulative weights of x^exponent over the integers [lo, hi], with the
/// weight of each integer x scaled by clamp(x - x0 + 1, 0, 1). Integer x0
/// gives the plain distribution on [x0, hi]; fractional x0 interpolates, and
/// the distribution is stochastically increasing in x0.
inline std::vector<double> power_law_cdf(double exponent, std::int64_t lo, std::int64_t hi, double x0) {
    std::vector<double> cdf(static_cast<std::size_t>(hi - lo + 1));
    double acc = 0.0;
    for (std::int64_t x = lo; x <= hi; ++x) {
        const double share = std::clamp(static_cast<double>(x) - x0 + 1.0, 0.0, 1.0);
        acc += share * std::pow(static_cast<double>(x), exponent);
        cdf[static_cast<std::size_t>(x - lo)] = acc;
    }
    return cdf;
}

inline std::int64_t power_law_quantile(const std::vector<double>& cdf, std::int64_t lo, double u) {
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    const auto pos = std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1);
    return lo + pos;
}

inline std::vector<std::int64_t> power_law_draws(double exponent, std::int64_t lo, std::int64_t hi, double x0,
                                                 const std::vector<double>& uniforms) {
    const auto cdf = power_law_cdf(exponent, lo, hi, x0);
    std::vector<std::int64_t> out(uniforms.size());
    for (std::size_t i = 0; i < uniforms.size(); ++i) {
        out[i] = power_law_quantile(cdf, lo, uniforms[i]);
    }
    return out;
}

inline double mean_of(const std::vector<std::int64_t>& xs) {
    double s = 0.0;
    for (auto x : xs) {
        s += static_cast<double>(x);
    }
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace detail

/// Draws `count` integers from P(x) ~ x^exponent on [lo, hi]. With a target
/// mean, the lower end of the support is raised by bisection (on a fixed set
/// of uniforms) until the realised mean is within 2% of the target.
inline std::vector<std::int64_t> sample_power_law(double exponent, std::int64_t lo, std::int64_t hi, std::size_t count,
                                                  std::optional<double> target_mean, Rng& rng) {
    if (lo < 1 || hi < lo) {
        throw GraphError("power-law support needs 1 <= lo <= hi");
    }
    std::vector<double> uniforms(count);
    for (auto& u : uniforms) {
        u = uniform_unit(rng);
    }
    auto draws = detail::power_law_draws(exponent, lo, hi, static_cast<double>(lo), uniforms);
    if (!target_mean || count == 0) {
        return draws;
    }
    const double target = *target_mean;
    const double slack = 0.02 * target;
    const double at_lo = detail::mean_of(draws);
    if (std::abs(at_lo - target) <= slack) {
        return draws;
    }
    if (at_lo > target) {
        throw InfeasibleError("target mean " + std::to_string(target) + " is below the attainable minimum " +
                              std::to_string(at_lo));
    }
    if (static_cast<double>(hi) < target - slack) {
        throw InfeasibleError("target mean " + std::to_string(target) + " exceeds the support maximum " +
                              std::to_string(hi));
    }
    double a = static_cast<double>(lo);
    double b = static_cast<double>(hi);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        draws = detail::power_law_draws(exponent, lo, hi, mid, uniforms);
        const double m = detail::mean_of(draws);
        if (std::abs(m - target) <= slack) {
            return draws;
        }
        (m < target ? a : b) = mid;
    }
    throw InfeasibleError("could not tune the power-law mean to within 2% of " + std::to_string(target));
}

struct PlantedPartition {
    /// Community index of every node.
    std::vector<std::uint32_t> community;
    /// Sorted member lists.
    std::vector<std::vector<NodeId>> members;

    [[nodiscard]] std::size_t num_communities() const noexcept { return members.size(); }
    [[nodiscard]] NodeSet community_set(std::size_t c) const { return NodeSet(members.at(c)); }
};

struct LfrGraph {
    Graph graph;
    PlantedPartition partition;
    /// Stub pairs dropped because rewiring could not make them simple.
    std::size_t discarded_edges = 0;
};

namespace detail {

/// Community sizes summing to n, each in [c_min, c_max].
inline std::vector<std::int64_t> community_sizes(const LfrParams& p, Rng& rng) {
    const auto n = static_cast<std::int64_t>(p.n);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::int64_t> sizes;
        std::int64_t total = 0;
        while (total < n) {
            const auto s = sample_power_law(p.tau2, p.c_min, p.c_max, 1, std::nullopt, rng).front();
            if (total + s <= n) {
                sizes.push_back(s);
                total += s;
                continue;
            }
            const auto rest = n - total;
            if (rest >= p.c_min) {
                sizes.push_back(rest);
                total = n;
                break;
            }
            // spread the remainder over communities that still have room
            auto left = rest;
            std::vector<std::size_t> open;
            for (std::size_t c = 0; c < sizes.size(); ++c) {
                if (sizes[c] < p.c_max) {
                    open.push_back(c);
                }
            }
            while (left > 0 && !open.empty()) {
                const auto k = static_cast<std::size_t>(uniform_below(rng, open.size()));
                ++sizes[open[k]];
                --left;
                if (sizes[open[k]] == p.c_max) {
                    open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
                }
            }
            if (left == 0) {
                total = n;
            }
            break;
        }
        if (total == n) {
            return sizes;
        }
    }
    throw InfeasibleError("could not split " + std::to_string(p.n) + " nodes into communities of size [" +
                          std::to_string(p.c_min) + ", " + std::to_string(p.c_max) + "]");
}

/// Hall's condition for nested eligibility: for every required size r, the
/// nodes needing a community of at least r members fit in those communities.
inline bool can_host(std::vector<std::int64_t> sizes, std::vector<std::int64_t> need) {
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    std::sort(need.begin(), need.end(), std::greater<>());
    std::size_t c = 0;
    std::int64_t capacity = 0;
    for (std::size_t k = 0; k < need.size(); ++k) {
        while (c < sizes.size() && sizes[c] >= need[k] + 1) {
            capacity += sizes[c++];
        }
        if (static_cast<std::int64_t>(k + 1) > capacity) {
            return false;
        }
    }
    return true;
}

/// Nodes go to uniformly drawn communities that still have room and are large
/// enough for the node's intra-community degree. High-demand nodes are placed
/// first so that the largest communities are not filled by low-degree nodes.
inline std::vector<std::uint32_t> assign_communities(const std::vector<std::int64_t>& sizes,
                                                     const std::vector<std::int64_t>& need, Rng& rng) {
    const auto n = need.size();
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    shuffle(std::span<NodeId>(order), rng);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return need[a] > need[b]; });
    for (int restart = 0; restart < 20; ++restart) {
        std::vector<std::int64_t> room = sizes;
        std::vector<std::uint32_t> comm(n, 0);
        bool ok = true;
        for (auto v : order) {
            std::optional<std::size_t> chosen;
            for (int tries = 0; tries < 64 && !chosen; ++tries) {
                const auto c = static_cast<std::size_t>(uniform_below(rng, sizes.size()));
                if (room[c] > 0 && sizes[c] >= need[v] + 1) {
                    chosen = c;
                }
            }
            if (!chosen) {
                std::vector<std::size_t> eligible;
                for (std::size_t c = 0; c < sizes.size(); ++c) {
                    if (room[c] > 0 && sizes[c] >= need[v] + 1) {
                        eligible.push_back(c);
                    }
                }
                if (eligible.empty()) {
                    ok = false;
                    break;
                }
                chosen = eligible[static_cast<std::size_t>(uniform_below(rng, eligible.size()))];
            }
            --room[*chosen];
            comm[v] = static_cast<std::uint32_t>(*chosen);
        }
        if (ok) {
            return comm;
        }
        shuffle(std::span<NodeId>(order), rng);
        std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return need[a] > need[b]; });
    }
    throw InfeasibleError("could not assign nodes to communities large enough for their intra-community degree");
}

/// Splits each degree into intra and inter stubs so that every community's
/// intra total is the integer closest to (1 - mu) vol(C). Per-node values
/// start from floor((1 - mu) k) and the remaining units go to the largest
/// fractional parts, ties in random order. An odd community total is made
/// even by lowering the degree of one member by one.
inline std::vector<std::int64_t> intra_degrees(std::vector<std::int64_t>& degree,
                                               const std::vector<std::vector<NodeId>>& members, double mu, Rng& rng) {
    std::vector<std::int64_t> intra(degree.size(), 0);
    for (const auto& mem : members) {
        const auto cap = static_cast<std::int64_t>(mem.size()) - 1;
        double target = 0.0;
        std::int64_t base = 0;
        std::vector<std::pair<double, NodeId>> frac;
        for (auto v : mem) {
            const double want = (1.0 - mu) * static_cast<double>(degree[v]);
            intra[v] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(want + 1e-12)), cap);
            base += intra[v];
            target += want;
            frac.emplace_back(want - std::floor(want + 1e-12), v);
        }
        const auto goal = static_cast<std::int64_t>(std::llround(target));
        std::vector<NodeId> tie_order(mem.begin(), mem.end());
        shuffle(std::span<NodeId>(tie_order), rng);
        std::vector<std::size_t> rank_of(degree.size(), 0);
        for (std::size_t k = 0; k < tie_order.size(); ++k) {
            rank_of[tie_order[k]] = k;
        }
        std::sort(frac.begin(), frac.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) {
                return a.first > b.first;
            }
            return rank_of[a.second] < rank_of[b.second];
        });
        // add units to the largest fractions, then anywhere there is room
        for (std::size_t pass = 0; pass < 2 && base < goal; ++pass) {
            for (const auto& [f, v] : frac) {
                if (base == goal) {
                    break;
                }
                const bool eligible = pass == 1 || f > 0.0;
                if (eligible && intra[v] < std::min(degree[v], cap)) {
                    ++intra[v];
                    ++base;
                }
            }
        }
        for (auto it = frac.rbegin(); it != frac.rend() && base > goal; ++it) {
            if (intra[it->second] > 0) {
                --intra[it->second];
                --base;
            }
        }
        if (base % 2 != 0) {
            // drop one intra stub together with its degree unit so no inter stub appears
            for (auto v : tie_order) {
                if (intra[v] > 0 && degree[v] > 1) {
                    --intra[v];
                    --degree[v];
                    break;
                }
            }
        }
    }
    return intra;
}

inline std::uint64_t edge_key(NodeId a, NodeId b) {
    const auto [x, y] = std::minmax(a, b);
    return (std::uint64_t{x} << 32) | y;
}

/// Uniform stub matching followed by rewiring of self-loops, repeated edges
/// and pairs rejected by `allowed`. Each bad pair is swapped with a random
/// pair; after `max_swaps` attempts the remaining bad pairs are dropped.
template <typename Allowed>
std::vector<std::pair<NodeId, NodeId>> match_stubs(std::vector<NodeId> stubs, Rng& rng, Allowed allowed,
                                                   std::size_t& discarded) {
    shuffle(std::span<NodeId>(stubs), rng);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(stubs.size() / 2);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        pairs.emplace_back(stubs[k], stubs[k + 1]);
    }
    std::unordered_map<std::uint64_t, std::uint32_t> multiplicity;
    for (const auto& [a, b] : pairs) {
        ++multiplicity[edge_key(a, b)];
    }
    auto good = [&](NodeId a, NodeId b) { return a != b && allowed(a, b); };
    auto is_bad = [&](const std::pair<NodeId, NodeId>& e) {
        return !good(e.first, e.second) || multiplicity[edge_key(e.first, e.second)] > 1;
    };
    std::vector<std::size_t> bad;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (is_bad(pairs[k])) {
            bad.push_back(k);
        }
    }
    const std::size_t max_swaps = 100 * std::max<std::size_t>(pairs.size(), 1);
    std::size_t swaps = 0;
    while (!bad.empty() && swaps < max_swaps && pairs.size() > 1) {
        const auto k = bad.back();
        if (!is_bad(pairs[k])) {
            bad.pop_back();
            continue;
        }
        ++swaps;
        const auto j = static_cast<std::size_t>(uniform_below(rng, pairs.size()));
        if (j == k) {
            continue;
        }
        auto [a, b] = pairs[k];
        auto [c, d] = pairs[j];
        if (uniform_below(rng, 2) == 1) {
            std::swap(c, d);
        }
        // proposed: (a, c) and (b, d)
        if (!good(a, c) || !good(b, d) || edge_key(a, c) == edge_key(b, d)) {
            continue;
        }
        const auto kac = edge_key(a, c);
        const auto kbd = edge_key(b, d);
        if (multiplicity[kac] > 0 || multiplicity[kbd] > 0) {
            continue;
        }
        --multiplicity[edge_key(a, b)];
        --multiplicity[edge_key(pairs[j].first, pairs[j].second)];
        ++multiplicity[kac];
        ++multiplicity[kbd];
        pairs[k] = {a, c};
        pairs[j] = {b, d};
        bad.pop_back();
    }
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(pairs.size());
    std::unordered_set<std::uint64_t> seen;
    for (const auto& e : pairs) {
        if (!good(e.first, e.second) || !seen.insert(edge_key(e.first, e.second)).second) {
            ++discarded;
            continue;
        }
        out.push_back(e);
    }
    return out;
}


/// First k (1-based) at which the Erdos-Gallai inequality fails for the
/// values of `nodes` sorted in descending order, or 0 when the sequence is
/// graphical. `order` receives that descending order.
inline std::size_t erdos_gallai_violation(const std::vector<NodeId>& nodes, const std::vector<std::int64_t>& d,
                                          std::vector<NodeId>& order) {
    order = nodes;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return d[a] > d[b]; });
    const auto m = order.size();
    std::int64_t left = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        left += d[order[k - 1]];
        auto right = static_cast<std::int64_t>(k * (k - 1));
        for (std::size_t i = k; i < m; ++i) {
            right += std::min<std::int64_t>(d[order[i]], static_cast<std::int64_t>(k));
        }
        if (left > right) {
            return k;
        }
    }
    return 0;
}

/// Moves intra stubs from the largest members of a community to members
/// below the violated Erdos-Gallai bound until the sequence is graphical.
/// The community total is kept whenever some member has spare degree.
inline void make_graphical(const std::vector<NodeId>& mem, std::vector<std::int64_t>& intra,
                           const std::vector<std::int64_t>& degree) {
    const auto cap = static_cast<std::int64_t>(mem.size()) - 1;
    std::vector<NodeId> order;
    for (std::size_t guard = 0; guard < 100000; ++guard) {
        const auto k = erdos_gallai_violation(mem, intra, order);
        if (k == 0) {
            return;
        }
        const NodeId top = order.front();
        std::optional<NodeId> lift;
        for (auto it = order.rbegin(); it != order.rend() - static_cast<std::ptrdiff_t>(k); ++it) {
            const auto v = *it;
            if (intra[v] < static_cast<std::int64_t>(k) && intra[v] < std::min(degree[v], cap)) {
                lift = v;
                break;
            }
        }
        --intra[top];
        if (lift) {
            ++intra[*lift];
        } else {
            --intra[order.size() > 1 ? order[1] : top];
        }
    }
}

/// Havel-Hakimi realisation of a graphical sequence followed by random
/// degree-preserving double edge swaps.
inline std::vector<std::pair<NodeId, NodeId>> realize_sequence(const std::vector<NodeId>& mem,
                                                               const std::vector<std::int64_t>& d, Rng& rng,
                                                               std::size_t& discarded) {
    std::vector<std::pair<std::int64_t, NodeId>> left;
    for (auto v : mem) {
        if (d[v] > 0) {
            left.emplace_back(d[v], v);
        }
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::unordered_set<std::uint64_t> present;
    while (!left.empty()) {
        std::stable_sort(left.begin(), left.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        auto [need, v] = left.front();
        left.erase(left.begin());
        for (auto& [r, u] : left) {
            if (need == 0) {
                break;
            }
            --r;
            --need;
            edges.emplace_back(v, u);
            present.insert(edge_key(v, u));
        }
        discarded += static_cast<std::size_t>(need);
        std::erase_if(left, [](const auto& e) { return e.first == 0; });
    }
    const std::size_t m = edges.size();
    for (std::size_t step = 0; m > 1 && step < 20 * m; ++step) {
        const auto i = static_cast<std::size_t>(uniform_below(rng, m));
        const auto j = static_cast<std::size_t>(uniform_below(rng, m));
        auto [a, b] = edges[i];
        auto [c, e] = edges[j];
        if (uniform_below(rng, 2) == 1) {
            std::swap(c, e);
        }
        if (i == j || a == c || b == e || present.contains(edge_key(a, c)) || present.contains(edge_key(b, e))) {
            continue;
        }
        present.erase(edge_key(a, b));
        present.erase(edge_key(c, e));
        present.insert(edge_key(a, c));
        present.insert(edge_key(b, e));
        edges[i] = {a, c};
        edges[j] = {b, e};
    }
    return edges;
}
}  // namespace detail

/// Builds an LFR graph and its planted partition. Degrees are drawn on
/// [1, effective_k_max()] with the lower end tuned to reach k_mean.
inline LfrGraph generate_lfr(const LfrParams& p) {
    p.validate();
    Rng rng(derive_seed(p.rng_seed, 0x4c4652));
    const auto n = p.n;
    const auto k_hi = p.effective_k_max();
    if (static_cast<double>(k_hi) < p.k_mean) {
        throw InfeasibleError("mean degree " + std::to_string(p.k_mean) +
                              " cannot be reached when intra-community degrees must fit in c_max = " +
                              std::to_string(p.c_max));
    }
    auto degree = sample_power_law(p.tau1, 1, k_hi, n, p.k_mean, rng);
    std::vector<std::int64_t> need(n);
    for (std::size_t v = 0; v < n; ++v) {
        need[v] = static_cast<std::int64_t>(std::ceil((1.0 - p.mu) * static_cast<double>(degree[v]) - 1e-12));
    }
    // Several independent layouts are drawn and the one whose realisable
    // intra-community degrees stay closest to the target mixing is kept.
    constexpr int kLayouts = 1024;
    const auto base_degree = degree;
    LfrGraph out;
    std::vector<std::int64_t> intra;
    double best_excess = kInfinity;
    for (int layout = 0; layout < kLayouts && best_excess > 0.0; ++layout) {
        std::vector<std::int64_t> sizes;
        for (int attempt = 0;; ++attempt) {
            sizes = detail::community_sizes(p, rng);
            if (detail::can_host(sizes, need)) {
                break;
            }
            if (attempt == 999) {
                throw InfeasibleError("no sampled community sizes could host every node's intra-community degree");
            }
        }
        const auto comm = detail::assign_communities(sizes, need, rng);
        PlantedPartition part;
        part.community = comm;
        part.members.resize(sizes.size());
        for (NodeId v = 0; v < n; ++v) {
            part.members[comm[v]].push_back(v);
        }
        auto deg = base_degree;
        auto in = detail::intra_degrees(deg, part.members, p.mu, rng);
        double excess = 0.0;
        for (const auto& mem : part.members) {
            detail::make_graphical(mem, in, deg);
            double vol = 0.0;
            double inside = 0.0;
            for (auto v : mem) {
                vol += static_cast<double>(deg[v]);
                inside += static_cast<double>(in[v]);
            }
            if (vol > 0.0) {
                excess += std::max(0.0, std::abs((vol - inside) / vol - p.mu) - 0.1 * p.mu - 2.0 / vol);
            }
        }
        if (excess < best_excess) {
            best_excess = excess;
            out.partition = std::move(part);
            intra = std::move(in);
            degree = std::move(deg);
        }
    }

    std::vector<WeightedEdge<NodeId>> edges;
    for (const auto& mem : out.partition.members) {
        detail::make_graphical(mem, intra, degree);
        std::vector<NodeId> stubs;
        for (auto v : mem) {
            stubs.insert(stubs.end(), static_cast<std::size_t>(intra[v]), v);
        }
        std::size_t dropped = 0;
        auto pairs = detail::match_stubs(std::move(stubs), rng, [](NodeId, NodeId) { return true; }, dropped);
        if (dropped > 0) {
            pairs = detail::realize_sequence(mem, intra, rng, out.discarded_edges);
        }
        for (const auto& [a, b] : pairs) {
            edges.push_back({a, b, 1.0});
        }
    }
    std::int64_t inter_total = 0;
    for (NodeId v = 0; v < n; ++v) {
        inter_total += degree[v] - intra[v];
    }
    if (inter_total % 2 != 0) {
        std::vector<NodeId> candidates;
        for (NodeId v = 0; v < n; ++v) {
            if (degree[v] > intra[v]) {
                candidates.push_back(v);
            }
        }
        --degree[candidates[static_cast<std::size_t>(uniform_below(rng, candidates.size()))]];
    }
    std::vector<NodeId> inter_stubs;
    for (NodeId v = 0; v < n; ++v) {
        inter_stubs.insert(inter_stubs.end(), static_cast<std::size_t>(degree[v] - intra[v]), v);
    }
    for (const auto& [a, b] : detail::match_stubs(
             std::move(inter_stubs), rng, [&](NodeId x, NodeId y) { return out.partition.community[x] != out.partition.community[y]; },
             out.discarded_edges)) {
        edges.push_back({a, b, 1.0});
    }
    out.graph = Graph::from_indexed(n, edges);
    return out;
}

struct LfrNcp {
    LfrParams params;
    NcpCurve curve;
};

/// One generated graph and AclCut global NCP per parameter set. Grid points
/// run in parallel; each has its own RNG stream.
inline std::vector<LfrNcp> lfr_ncp_sweep(std::span<const LfrParams> grid, const CoverageBudget& budget = {},
                                         const MethodConfig& method = {}) {
    std::vector<LfrNcp> out(grid.size());
    CoverageBudget inner = budget;
    inner.threads = 1;
    parallel_for(grid.size(), budget.threads, [&](std::size_t i) {
        const auto lfr = generate_lfr(grid[i]);
        CoverageBudget b = inner;
        b.rng_seed = derive_seed(budget.rng_seed, grid[i].rng_seed, i);
        out[i] = LfrNcp{grid[i], global_ncp(lfr.graph, method, b).curve};
    });
    return out;
}

}  // namespace ncpkit
