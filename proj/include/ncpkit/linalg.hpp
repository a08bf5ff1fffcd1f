#pragma once

// Iterative kernels shared by the spectral modules: vector helpers, a
// projected conjugate-gradient solver and a restarted Lanczos eigensolver for
// the bottom of the normalized Laplacian spectrum.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace ncpkit {

using Vec = std::vector<double>;

namespace linalg {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

inline void scale(std::span<double> x, double alpha) {
    for (auto& v : x) {
        v *= alpha;
    }
}

/// Removes the component of x along the unit vector u.
inline void project_out(std::span<double> x, std::span<const double> u) {
    axpy(-dot(x, u), u, x);
}

/// y = D^{-1/2} A D^{-1/2} x (nodes of zero strength map to zero).
inline void normalized_adjacency_apply(const Graph& g, std::span<const double> inv_sqrt_d,
                                       std::span<const double> x, std::span<double> y) {
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
        const auto nb = g.neighbors(u);
        const auto w = g.weights(u);
        double acc = 0.0;
        for (std::size_t k = 0; k < nb.size(); ++k) {
            acc += w[k] * inv_sqrt_d[nb[k]] * x[nb[k]];
        }
        y[u] = inv_sqrt_d[u] * acc;
    }
}

inline Vec inverse_sqrt_strengths(const Graph& g) {
    Vec out(g.num_nodes(), 0.0);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        const double d = g.strength(v);
        out[v] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    }
    return out;
}

/// Unit vector D^{1/2} 1 / ||D^{1/2} 1||: the null vector of the normalized Laplacian.
inline Vec trivial_eigenvector(const Graph& g) {
    Vec v(g.num_nodes());
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        v[i] = std::sqrt(g.strength(i));
    }
    const double nv = norm(v);
    if (nv > 0.0) {
        scale(v, 1.0 / nv);
    }
    return v;
}

}  // namespace linalg

/// Raised when CG meets non-positive curvature: the operator is not positive
/// definite on the solve subspace.
class NegativeCurvatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CgOptions {
    double rel_tol = 1e-8;
    std::size_t max_iter = 0;  ///< 0 selects 20 n + 100
    std::size_t max_restarts = 8;
};

struct CgReport {
    std::size_t iterations = 0;
    double rel_residual = 0.0;  ///< in the caller's residual norm
    bool converged = false;
};

/// Conjugate gradients for an operator that is symmetric positive definite on
/// the orthogonal complement of `deflate` (which may be empty). The right-hand
/// side is projected onto that complement and iterates stay in it.
///
/// `residual_norm` maps a residual of the solved system to the norm the caller
/// wants certified; convergence is declared when that norm is below
/// rel_tol * residual_norm(b). Restarts recompute the true residual, so the
/// returned certificate never relies on the recursive update alone. When
/// rounding makes the requested tolerance unreachable the solver stops once
/// the true residual stagnates and reports converged = false.
template <typename Apply, typename ResidualNorm>
CgReport conjugate_gradient(Apply&& apply, std::span<const double> b, std::span<double> x,
                            std::span<const double> deflate, ResidualNorm&& residual_norm,
                            const CgOptions& opt = {}) {
    const auto n = b.size();
    const std::size_t max_iter = opt.max_iter ? opt.max_iter : 20 * n + 100;
    Vec rhs(b.begin(), b.end());
    if (!deflate.empty()) {
        linalg::project_out(rhs, deflate);
        linalg::project_out(x, deflate);
    }
    const double bnorm = residual_norm(std::span<const double>(rhs));
    CgReport report;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        report.converged = true;
        return report;
    }
    const double target = opt.rel_tol * bnorm;

    Vec r(n), p(n), ap(n);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart) {
        apply(std::span<const double>(x), std::span<double>(ap));
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = rhs[i] - ap[i];
        }
        if (!deflate.empty()) {
            linalg::project_out(r, deflate);
        }
        const double true_res = residual_norm(std::span<const double>(r));
        report.rel_residual = true_res / bnorm;
        if (true_res <= target) {
            report.converged = true;
            return report;
        }
        if (restart > 0 && true_res > 0.5 * best) {
            break;  // stagnated at the rounding floor
        }
        best = std::min(best, true_res);

        p = r;
        double rr = linalg::dot(r, r);
        for (std::size_t it = 0; it < max_iter; ++it) {
            apply(std::span<const double>(p), std::span<double>(ap));
            if (!deflate.empty()) {
                linalg::project_out(ap, deflate);
            }
            const double curvature = linalg::dot(p, ap);
            if (!(curvature > 0.0)) {
                throw NegativeCurvatureError("conjugate gradient met non-positive curvature " +
                                             std::to_string(curvature));
            }
            const double step = rr / curvature;
            linalg::axpy(step, p, x);
            linalg::axpy(-step, ap, r);
            ++report.iterations;
            const double rr_next = linalg::dot(r, r);
            if (residual_norm(std::span<const double>(r)) <= 0.5 * target || rr_next == 0.0) {
                break;
            }
            const double beta = rr_next / rr;
            rr = rr_next;
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = r[i] + beta * p[i];
            }
            if (!deflate.empty()) {
                linalg::project_out(p, deflate);
            }
        }
    }
    return report;
}

struct EigenPair {
    double value = 0.0;
    Vec vector;  ///< unit 2-norm, orthogonal to the trivial eigenvector
    double residual = 0.0;
    std::size_t matvecs = 0;
};

struct LanczosOptions {
    double tol = 1e-8;            ///< residual norm ||Lv - theta v||
    std::size_t max_matvecs = 0;  ///< 0 selects max(10 n, 2000)
    std::size_t krylov_dim = 120;
    std::uint64_t rng_seed = 0x5eed1a2c05ULL;
};

/// Smallest eigenpair of the normalized Laplacian I - D^{-1/2} A D^{-1/2} on the
/// orthogonal complement of D^{1/2} 1. Lanczos with full reorthogonalisation,
/// restarted from the current Ritz vector.
inline EigenPair smallest_nontrivial_eigenpair(const Graph& g, const LanczosOptions& opt = {}) {
    const auto n = g.num_nodes();
    if (n < 2) {
        throw GraphError("eigenproblem needs at least two nodes");
    }
    const auto inv_sqrt_d = linalg::inverse_sqrt_strengths(g);
    const auto trivial = linalg::trivial_eigenvector(g);
    const std::size_t dim = std::min(n - 1, std::max<std::size_t>(opt.krylov_dim, 2));
    const std::size_t budget = opt.max_matvecs ? opt.max_matvecs : std::max<std::size_t>(10 * n, 2000);

    auto apply_laplacian = [&](std::span<const double> x, std::span<double> y) {
        linalg::normalized_adjacency_apply(g, inv_sqrt_d, x, y);
        for (std::size_t i = 0; i < n; ++i) {
            // isolated nodes have L_ii = 0 under the convention D^{-1/2} = 0
            y[i] = (g.strength(static_cast<NodeId>(i)) > 0.0 ? x[i] : 0.0) - y[i];
        }
    };

    std::mt19937_64 rng(opt.rng_seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec start(n);
    for (auto& v : start) {
        v = unif(rng);
    }

    EigenPair result;
    std::vector<Vec> basis;
    basis.reserve(dim + 1);
    Vec w(n);
    while (true) {
        linalg::project_out(start, trivial);
        double sn = linalg::norm(start);
        if (sn == 0.0) {
            throw GraphError("Lanczos start vector collapsed");
        }
        linalg::scale(start, 1.0 / sn);
        basis.clear();
        basis.push_back(start);
        std::vector<double> alpha, beta;
        bool invariant = false;
        for (std::size_t j = 0; j < dim; ++j) {
            apply_laplacian(basis[j], w);
            ++result.matvecs;
            const double a = linalg::dot(w, basis[j]);
            alpha.push_back(a);
            // full reorthogonalisation, twice for stability
            for (int pass = 0; pass < 2; ++pass) {
                linalg::project_out(w, trivial);
                for (const auto& q : basis) {
                    linalg::project_out(w, q);
                }
            }
            const double bnext = linalg::norm(w);
            if (j + 1 == dim) {
                beta.push_back(bnext);
                break;
            }
            if (bnext <= 1e-13 * std::max(1.0, std::abs(a))) {
                invariant = true;
                beta.push_back(0.0);
                break;
            }
            beta.push_back(bnext);
            Vec q(w);
            linalg::scale(q, 1.0 / bnext);
            basis.push_back(std::move(q));
        }

        const auto k = alpha.size();
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
            if (i + 1 < k) {
                t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
                t(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const auto y = es.eigenvectors().col(0);

        Vec ritz(n, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            linalg::axpy(y(static_cast<Eigen::Index>(i)), basis[i], ritz);
        }
        linalg::project_out(ritz, trivial);
        linalg::scale(ritz, 1.0 / linalg::norm(ritz));

        // explicit residual; the Lanczos estimate beta_k |y_k| loses accuracy
        // once the basis is no longer exactly orthogonal
        apply_laplacian(ritz, w);
        ++result.matvecs;
        const double rq = linalg::dot(ritz, w);
        linalg::axpy(-rq, ritz, w);
        linalg::project_out(w, trivial);
        const double res = linalg::norm(w);

        result.value = std::max(rq, 0.0);
        result.vector = ritz;
        result.residual = res;
        if (res <= opt.tol || invariant || k == n - 1 || result.matvecs >= budget) {
            if (res > opt.tol && !invariant && k != n - 1) {
                throw std::runtime_error("Lanczos did not reach residual " + std::to_string(opt.tol) +
                                         " within " + std::to_string(budget) +
                                         " matrix-vector products (residual " + std::to_string(res) + ")");
            }
            return result;
        }
        start = ritz;
    }
}

/// Second-smallest eigenvalue of the normalized Laplacian. Rejects disconnected graphs.
inline double lambda2(const Graph& g, double tol = 1e-8) {
    if (!is_connected(g)) {
        throw GraphError("lambda2 requires a connected graph");
    }
    LanczosOptions opt;
    opt.tol = tol;
    opt.max_matvecs = std::max<std::size_t>(10 * g.num_nodes(), 2000);
    return smallest_nontrivial_eigenpair(g, opt).value;
}

}  // namespace ncpkit
