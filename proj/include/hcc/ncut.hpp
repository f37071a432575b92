#pragma once

#include "hcc/sparse.hpp"
#include "hcc/svd.hpp"

#include <vector>

namespace hcc {

struct CutVolume {
    Eigen::VectorXd cut; // per cluster: weight leaving the cluster
    Eigen::VectorXd vol; // per cluster: sum of member degrees
};

// Per-cluster cut and volume of a partition on a symmetric nonnegative
// adjacency. Throws EmptyCluster when some cluster id in [0,k) has no
// member (volume would be zero).
CutVolume cut_and_vol(const CsrMatrix& a_g, const std::vector<int>& labels, int k);

// Normalized cut: sum_i cut(S_i)/vol(S_i).
double ncut(const CsrMatrix& a_g, const std::vector<int>& labels, int k);

// Scaled indicator: Q[v,i] = 1/sqrt(vol(S_i)) if v in S_i else 0;
// satisfies Q^T D_g Q = I and Ncut = trace(Q^T L_g Q).
Eigen::MatrixXd partition_indicator(const CsrMatrix& a_g,
                                    const std::vector<int>& labels, int k);

// Relaxed Ncut embedding: generalized eigenvectors of L_g q = lambda D_g q
// for the k smallest eigenvalues, computed on the equivalent symmetric
// shifted operator I + D^{-1/2} A D^{-1/2} so the SVD backends apply.
// Columns are D-orthonormal (Q^T D_g Q = I).
Eigen::MatrixXd relaxed_ncut_embedding(const CsrMatrix& a_g, int k,
                                       const SvdOptions& opts = {});

} // namespace hcc
