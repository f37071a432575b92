#include "hcc/walk.hpp"

#include "hcc/errors.hpp"
#include "hcc/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace hcc {

namespace {

CsrMatrix row_normalized(const CsrMatrix& m, const char* what) {
    CsrMatrix out = m;
    for (index_t r = 0; r < out.rows(); ++r) {
        auto vals = out.row_values_mut(r);
        double sum = 0.0;
        for (double v : vals) sum += v;
        if (!(sum > 0.0))
            throw ZeroRowSum(std::string(what) + " row " + std::to_string(r) +
                             " has zero sum");
        for (double& v : vals) v /= sum;
    }
    return out;
}

} // namespace

std::pair<CsrMatrix, CsrMatrix> transition_matrices(const EdvwHypergraph& h) {
    return {row_normalized(h.w, "W"), row_normalized(h.r, "R")};
}

CsrMatrix block_transition(const CsrMatrix& p_ve, const CsrMatrix& p_ev) {
    if (p_ve.rows() != p_ev.cols() || p_ve.cols() != p_ev.rows())
        throw LengthMismatch("block_transition: incompatible dimensions");
    const index_t nv = p_ve.rows();
    const index_t ne = p_ev.rows();
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(p_ve.nnz() + p_ev.nnz()));
    for (const auto& e : p_ve.to_triplets()) t.push_back({e.row, nv + e.col, e.value});
    for (const auto& e : p_ev.to_triplets()) t.push_back({nv + e.row, e.col, e.value});
    return CsrMatrix::from_triplets(nv + ne, nv + ne, std::move(t));
}

CsrMatrix lazy_walk(const CsrMatrix& p, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw AlphaOutOfRange("alpha = " + std::to_string(alpha) +
                              " outside (0,1)");
    if (p.rows() != p.cols())
        throw LengthMismatch("lazy_walk expects a square chain");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(p.nnz() + p.rows()));
    for (const auto& e : p.to_triplets()) t.push_back({e.row, e.col, alpha * e.value});
    for (index_t i = 0; i < p.rows(); ++i) t.push_back({i, i, 1.0 - alpha});
    return CsrMatrix::from_triplets(p.rows(), p.cols(), std::move(t));
}

Eigen::VectorXd stationary_distribution(const CsrMatrix& p_ve, const CsrMatrix& p_ev,
                                        const StationaryOptions& opts) {
    const index_t nv = p_ve.rows();
    const index_t ne = p_ev.rows();
    if (p_ve.cols() != ne || p_ev.cols() != nv)
        throw LengthMismatch("stationary_distribution: incompatible blocks");
    if (!(opts.device_alpha > 0.0 && opts.device_alpha < 1.0))
        throw AlphaOutOfRange("device_alpha outside (0,1)");

    const CsrMatrix p_ve_t = p_ve.transposed(); // |E| x |V|
    const CsrMatrix p_ev_t = p_ev.transposed(); // |V| x |E|

    // Start from the fixed point's exact block masses.
    Eigen::VectorXd x(nv + ne);
    x.head(nv).setConstant(0.5 / static_cast<double>(nv));
    x.tail(ne).setConstant(0.5 / static_cast<double>(ne));

    Eigen::VectorXd z(nv + ne);
    const double a = opts.device_alpha;
    for (int it = 0; it < opts.max_iter; ++it) {
        // z = P^T x  (z_V = P_ev^T x_E, z_E = P_ve^T x_V)
        kernels::spmv(p_ev_t, x.data() + nv, z.data());
        kernels::spmv(p_ve_t, x.data(), z.data() + nv);

        // pi^T P_alpha - pi^T = alpha (pi^T P - pi^T) for every alpha, so the
        // full-chain residual is the one worth controlling.
        const double residual = (z - x).lpNorm<1>();
        if (residual <= opts.tol) return x;

        x = (1.0 - a) * x + a * z;
        const double mv = x.head(nv).sum();
        const double me = x.tail(ne).sum();
        x.head(nv) *= 0.5 / mv;
        x.tail(ne) *= 0.5 / me;
    }
    throw NoConvergence("stationary distribution: residual above " +
                        std::to_string(opts.tol) + " after " +
                        std::to_string(opts.max_iter) +
                        " iterations (tol/max_iter too tight for this instance)");
}

Eigen::VectorXd stationary_exact(const CsrMatrix& p_ve, const CsrMatrix& p_ev,
                                 double alpha) {
    const index_t n = p_ve.rows() + p_ev.rows();
    const CsrMatrix p = block_transition(p_ve, p_ev);
    const CsrMatrix pa = lazy_walk(p, alpha);
    // (P_alpha^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd m = pa.to_dense().transpose() - Eigen::MatrixXd::Identity(n, n);
    m.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[n - 1] = 1.0;
    return m.partialPivLu().solve(rhs);
}

WalkOperators build_walk(const EdvwHypergraph& h, double alpha,
                         const StationaryOptions& opts) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw AlphaOutOfRange("alpha = " + std::to_string(alpha) +
                              " outside (0,1)");
    WalkOperators walk;
    walk.n_vertices = h.n_vertices;
    walk.n_hyperedges = h.n_hyperedges;
    walk.alpha = alpha;
    std::tie(walk.p_ve, walk.p_ev) = transition_matrices(h);
    walk.p_ve_t = walk.p_ve.transposed();
    walk.p_ev_t = walk.p_ev.transposed();
    walk.pi = stationary_distribution(walk.p_ve, walk.p_ev, opts);
    walk.phi_v = walk.pi.head(h.n_vertices);
    walk.phi_e = walk.pi.tail(h.n_hyperedges);
    return walk;
}

HypergraphLaplacians laplacians(const WalkOperators& walk) {
    const index_t nv = walk.n_vertices;
    const index_t ne = walk.n_hyperedges;
    const double alpha = walk.alpha;

    // A = (Phi P_alpha + P_alpha^T Phi) / 2
    //   = (1-alpha) Phi + (alpha/2) [[0, S], [S^T, 0]],
    //   S = Phi_V P_ve + P_ev^T Phi_E.
    std::vector<Triplet> s_entries;
    s_entries.reserve(static_cast<std::size_t>(walk.p_ve.nnz() + walk.p_ev.nnz()));
    for (const auto& e : walk.p_ve.to_triplets())
        s_entries.push_back({e.row, e.col, walk.phi_v[e.row] * e.value});
    for (const auto& e : walk.p_ev.to_triplets())
        s_entries.push_back({e.col, e.row, e.value * walk.phi_e[e.row]});
    const CsrMatrix s = CsrMatrix::from_triplets(nv, ne, std::move(s_entries));

    HypergraphLaplacians out;
    {
        std::vector<Triplet> a_entries;
        a_entries.reserve(static_cast<std::size_t>(2 * s.nnz() + nv + ne));
        for (const auto& e : s.to_triplets()) {
            a_entries.push_back({e.row, nv + e.col, 0.5 * alpha * e.value});
            a_entries.push_back({nv + e.col, e.row, 0.5 * alpha * e.value});
        }
        for (index_t i = 0; i < nv + ne; ++i)
            a_entries.push_back({i, i, (1.0 - alpha) * walk.pi[i]});
        out.a = CsrMatrix::from_triplets(nv + ne, nv + ne, std::move(a_entries));
    }
    {
        // L = diag(pi) - A: the diagonal collapses to alpha*pi.
        std::vector<Triplet> l_entries;
        l_entries.reserve(static_cast<std::size_t>(2 * s.nnz() + nv + ne));
        for (const auto& e : s.to_triplets()) {
            l_entries.push_back({e.row, nv + e.col, -0.5 * alpha * e.value});
            l_entries.push_back({nv + e.col, e.row, -0.5 * alpha * e.value});
        }
        for (index_t i = 0; i < nv + ne; ++i)
            l_entries.push_back({i, i, alpha * walk.pi[i]});
        out.l = CsrMatrix::from_triplets(nv + ne, nv + ne, std::move(l_entries));
    }
    {
        Eigen::VectorXd inv_sqrt(nv + ne);
        for (index_t i = 0; i < nv + ne; ++i) {
            if (!(walk.pi[i] > 0.0))
                throw NonPositiveWeight("stationary mass pi[" + std::to_string(i) +
                                        "] must be positive");
            inv_sqrt[i] = 1.0 / std::sqrt(walk.pi[i]);
        }
        out.l_norm = out.l;
        out.l_norm.scale_rows(inv_sqrt);
        out.l_norm.scale_cols(inv_sqrt);
    }
    return out;
}

} // namespace hcc
