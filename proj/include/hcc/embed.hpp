#pragma once

#include "hcc/svd.hpp"
#include "hcc/walk.hpp"

#include <limits>
#include <vector>

namespace hcc {

// Half-size SVD target: the |V| x |E| matrix whose top singular triplets
// are, after diagonal rescaling, the bottom eigenpairs of the normalized
// Laplacian. Built from the walk's row-stochastic blocks and stationary
// masses only, so it carries no dependence on the walk's laziness alpha.
struct HalfMatrix {
    CsrMatrix a_bar;   // (Phi_V^{1/2} P_ve Phi_E^{-1/2} + Phi_V^{-1/2} P_ev^T Phi_E^{1/2}) / 2
    CsrMatrix a_bar_t; // transpose, materialized for row-parallel products
};

HalfMatrix half_matrix(const WalkOperators& walk);

// Joint embedding of vertices and hyperedges: rows 0..|V|-1 embed the
// vertices, the remaining |E| rows the hyperedges. Column i corresponds to
// singular value sigma_i of the half matrix (descending), equivalently to
// normalized-Laplacian eigenvalue alpha*(1 - sigma_i) (ascending).
struct SpectralEmbedding {
    RowMatrixXd u;                  // (|V|+|E|) x k
    Eigen::VectorXd singular_values;
    bool normalized = false;        // unit-norm rows applied
    int k = 0;
    index_t n_vertices = 0;
    index_t n_hyperedges = 0;
    std::vector<index_t> zero_rows; // rows left unnormalized (norm underflow)
    double sigma_next = 0.0;        // sigma_{k+1} estimate (NaN if unavailable)
    bool gap_degenerate = false;    // sigma_k - sigma_{k+1} < 1e-10
};

// Top-k singular triplets of the half matrix. Thin wrapper over svd_top_k
// that keeps the embed-facing contract (KTooLarge on k > min(|V|,|E|)).
SvdResult top_k_svd(const HalfMatrix& half, int k, const SvdOptions& opts = {});

// Scale the singular-vector blocks by Phi^{-1/2} and stack them. With
// normalize = true every row is rescaled to unit Euclidean norm (rows with
// underflowing norms are left as-is and reported).
SpectralEmbedding assemble_embedding(const Eigen::MatrixXd& u_bar,
                                     const Eigen::MatrixXd& v_bar,
                                     const Eigen::VectorXd& sigma,
                                     const WalkOperators& walk, bool normalize,
                                     double sigma_next =
                                         std::numeric_limits<double>::quiet_NaN());

// half_matrix + top_k_svd + assemble_embedding in one call.
SpectralEmbedding spectral_embedding(const WalkOperators& walk, int k,
                                     bool normalize, const SvdOptions& opts = {});

} // namespace hcc
