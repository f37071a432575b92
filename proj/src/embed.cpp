#include "hcc/embed.hpp"

#include "hcc/errors.hpp"
#include "hcc/kernels.hpp"

#include <cmath>
#include <string>

namespace hcc {

HalfMatrix half_matrix(const WalkOperators& walk) {
    const index_t nv = walk.n_vertices;
    const index_t ne = walk.n_hyperedges;

    Eigen::VectorXd sqrt_v(nv), inv_sqrt_v(nv);
    for (index_t v = 0; v < nv; ++v) {
        if (!(walk.phi_v[v] > 0.0))
            throw NonPositiveWeight("phi_v[" + std::to_string(v) + "] <= 0");
        sqrt_v[v] = std::sqrt(walk.phi_v[v]);
        inv_sqrt_v[v] = 1.0 / sqrt_v[v];
    }
    Eigen::VectorXd sqrt_e(ne), inv_sqrt_e(ne);
    for (index_t e = 0; e < ne; ++e) {
        if (!(walk.phi_e[e] > 0.0))
            throw NonPositiveWeight("phi_e[" + std::to_string(e) + "] <= 0");
        sqrt_e[e] = std::sqrt(walk.phi_e[e]);
        inv_sqrt_e[e] = 1.0 / sqrt_e[e];
    }

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(walk.p_ve.nnz() + walk.p_ev.nnz()));
    for (const auto& t : walk.p_ve.to_triplets())
        entries.push_back({t.row, t.col, 0.5 * sqrt_v[t.row] * t.value * inv_sqrt_e[t.col]});
    for (const auto& t : walk.p_ev.to_triplets())
        entries.push_back({t.col, t.row, 0.5 * inv_sqrt_v[t.col] * t.value * sqrt_e[t.row]});

    HalfMatrix half;
    half.a_bar = CsrMatrix::from_triplets(nv, ne, std::move(entries));
    half.a_bar_t = half.a_bar.transposed();
    return half;
}

SvdResult top_k_svd(const HalfMatrix& half, int k, const SvdOptions& opts) {
    return svd_top_k(half.a_bar, half.a_bar_t, k, opts);
}

SpectralEmbedding assemble_embedding(const Eigen::MatrixXd& u_bar,
                                     const Eigen::MatrixXd& v_bar,
                                     const Eigen::VectorXd& sigma,
                                     const WalkOperators& walk, bool normalize,
                                     double sigma_next) {
    const index_t nv = walk.n_vertices;
    const index_t ne = walk.n_hyperedges;
    if (u_bar.rows() != nv || v_bar.rows() != ne ||
        u_bar.cols() != v_bar.cols() || sigma.size() != u_bar.cols())
        throw LengthMismatch("assemble_embedding: inconsistent inputs");

    SpectralEmbedding emb;
    emb.k = static_cast<int>(sigma.size());
    emb.n_vertices = nv;
    emb.n_hyperedges = ne;
    emb.singular_values = sigma;
    emb.sigma_next = sigma_next;
    emb.u.resize(nv + ne, emb.k);
    for (index_t v = 0; v < nv; ++v)
        emb.u.row(v) = u_bar.row(v) / std::sqrt(walk.phi_v[v]);
    for (index_t e = 0; e < ne; ++e)
        emb.u.row(nv + e) = v_bar.row(e) / std::sqrt(walk.phi_e[e]);

    if (emb.k > 0 && sigma[emb.k - 1] <= 0.0)
        warn("top-k singular values include a non-positive value (sigma_k = " +
             std::to_string(sigma[emb.k - 1]) + ")");

    if (normalize) {
        emb.zero_rows = kernels::normalize_rows(emb.u);
        emb.normalized = true;
        for (index_t row : emb.zero_rows)
            warn("embedding row " + std::to_string(row) +
                 " has underflowing norm; left unnormalized");
    }
    return emb;
}

SpectralEmbedding spectral_embedding(const WalkOperators& walk, int k,
                                     bool normalize, const SvdOptions& opts) {
    const HalfMatrix half = half_matrix(walk);
    const SvdResult svd = top_k_svd(half, k, opts);
    SpectralEmbedding emb = assemble_embedding(svd.u, svd.v, svd.sigma, walk,
                                               normalize, svd.sigma_next);
    if (std::isfinite(svd.sigma_next) &&
        svd.sigma[k - 1] - svd.sigma_next < 1e-10) {
        emb.gap_degenerate = true;
        warn("singular gap sigma_k - sigma_{k+1} = " +
             std::to_string(svd.sigma[k - 1] - svd.sigma_next) +
             " < 1e-10; the k-dimensional subspace is ill-defined");
    }
    return emb;
}

} // namespace hcc
