#pragma once

// Locally-biased spectral partitioning: x* = (L - gamma D)^+ D s for a seed
// vector s that is D-orthogonal to the all-ones vector.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"
#include "linalg.hpp"
#include "rank.hpp"

namespace ncpkit {

/// gamma = (alpha - 1) / alpha. Negative alphas reach gamma > 1 and an
/// infinite alpha gives gamma = 1.
inline double gamma_from_alpha(double alpha) { return 1.0 - 1.0 / alpha; }
inline double alpha_from_gamma(double gamma) { return 1.0 / (1.0 - gamma); }

struct MovParams {
    double gamma = -1.0;
    NodeId seed = 0;
    /// Sweep sets with volume above this are discarded (community-size limit c).
    std::optional<double> volume_cap;

    static MovParams from_alpha(double alpha, NodeId seed, std::optional<double> volume_cap = {}) {
        if (alpha == 0.0 || std::isnan(alpha)) {
            throw GraphError("alpha must be nonzero");
        }
        return {gamma_from_alpha(alpha), seed, volume_cap};
    }
    [[nodiscard]] double alpha() const { return alpha_from_gamma(gamma); }
};

/// s = (e_i - (d_i / vol) 1) normalised so that s^T D s = 1; s^T D 1 = 0.
inline Vec seed_vector(const Graph& g, NodeId i) {
    g.check_node(i);
    const auto n = g.num_nodes();
    const double shift = g.strength(i) / g.total_volume();
    Vec s(n, -shift);
    s[i] += 1.0;
    double dnorm = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        dnorm += g.strength(v) * s[v] * s[v];
    }
    if (!(dnorm > 0.0)) {
        throw GraphError("seed vector has zero D-norm (isolated seed node)");
    }
    linalg::scale(s, 1.0 / std::sqrt(dnorm));
    return s;
}

/// Grid of `count` alphas, linear in [0.7, (1 - lambda_2)^{-1} - 1e-10]. When
/// lambda_2 >= 1 that upper end is negative or infinite: the grid is then taken
/// linear in gamma over [gamma(0.7), lambda_2 - 1e-10] and mapped back, so it
/// runs from 0.7 up through infinity into negative alphas.
inline std::vector<double> alpha_grid(double lambda2, std::size_t count) {
    if (count < 2) {
        throw GraphError("alpha grid needs at least two points");
    }
    constexpr double lo = 0.7;
    std::vector<double> out(count);
    if (lambda2 < 1.0) {
        const double hi = 1.0 / (1.0 - lambda2) - 1e-10;
        if (!(hi > lo)) {
            throw GraphError("alpha interval [0.7, (1 - lambda2)^-1 - 1e-10] is empty for lambda2 = " +
                             std::to_string(lambda2) + "; supply an explicit alpha list");
        }
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        out.back() = hi;
        return out;
    }
    const double glo = gamma_from_alpha(lo);
    const double ghi = lambda2 - 1e-10;
    for (std::size_t i = 0; i < count; ++i) {
        const double gamma = glo + (ghi - glo) * static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = alpha_from_gamma(gamma);
    }
    return out;
}

struct MovSolution {
    Vec x;
    CgReport report;
};

/// Holds the per-graph state (lambda_2, scalings) shared by every MovCut run.
class MovCut {
public:
    explicit MovCut(const Graph& g, std::optional<double> known_lambda2 = {})
        : g_(&g),
          inv_sqrt_d_(linalg::inverse_sqrt_strengths(g)),
          trivial_(linalg::trivial_eigenvector(g)) {
        if (!is_connected(g)) {
            throw GraphError("MovCut requires a connected graph");
        }
        lambda2_ = known_lambda2 ? *known_lambda2 : ncpkit::lambda2(g);
    }

    [[nodiscard]] double lambda2() const noexcept { return lambda2_; }

    /// Solves (L - gamma D) x = D s on the D-orthogonal complement of 1.
    [[nodiscard]] MovSolution solve(const MovParams& params) const {
        const Graph& g = *g_;
        g.check_node(params.seed);
        if (!(params.gamma < lambda2_)) {
            throw GraphError("gamma = " + std::to_string(params.gamma) +
                             " is not below lambda_2 = " + std::to_string(lambda2_));
        }
        const auto n = g.num_nodes();
        const Vec s = seed_vector(g, params.seed);
        // y = D^{1/2} x solves (Lnorm - gamma I) y = D^{1/2} s with y orthogonal to D^{1/2} 1
        Vec b(n);
        for (NodeId v = 0; v < n; ++v) {
            b[v] = std::sqrt(g.strength(v)) * s[v];
        }
        const double gamma = params.gamma;
        auto apply = [&](std::span<const double> x, std::span<double> y) {
            linalg::normalized_adjacency_apply(g, inv_sqrt_d_, x, y);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = (1.0 - gamma) * x[i] - y[i];
            }
        };
        // the certified residual is (L - gamma D) x - D s = D^{1/2} r_y
        auto x_space_norm = [&](std::span<const double> r) {
            double acc = 0.0;
            for (NodeId v = 0; v < n; ++v) {
                acc += g.strength(v) * r[v] * r[v];
            }
            return std::sqrt(acc);
        };
        MovSolution out;
        Vec y(n, 0.0);
        CgOptions opt;
        opt.rel_tol = 1e-8;
        out.report = conjugate_gradient(apply, b, y, trivial_, x_space_norm, opt);
        out.x.resize(n);
        for (NodeId v = 0; v < n; ++v) {
            out.x[v] = inv_sqrt_d_[v] * y[v];
        }
        return out;
    }

    [[nodiscard]] RankVector rank(const MovParams& params) const {
        auto sol = solve(params);
        return RankVector::from_dense(std::move(sol.x), Method::movcut, params.seed, params.alpha());
    }

    [[nodiscard]] std::vector<double> alpha_grid(std::size_t count) const {
        return ncpkit::alpha_grid(lambda2_, count);
    }

private:
    const Graph* g_;
    Vec inv_sqrt_d_;
    Vec trivial_;
    double lambda2_ = 0.0;
};

/// One-shot convenience; computes lambda_2 on every call.
inline RankVector movcut_rank(const Graph& g, const MovParams& params) { return MovCut(g).rank(params); }

}  // namespace ncpkit
