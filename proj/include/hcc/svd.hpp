#pragma once

#include "hcc/sparse.hpp"

#include <Eigen/Dense>
#include <cstdint>

namespace hcc {

enum class SvdBackend { randomized, lanczos, dense };

struct SvdOptions {
    SvdBackend backend = SvdBackend::randomized;
    // Per-column residual bound: max(||A v_i - s_i u_i||, ||A^T u_i - s_i v_i||).
    double tol = 1e-10;
    int max_iter = 300;
    std::uint64_t seed = 0;
    int oversample = 10;     // extra subspace directions beyond k
    int min_power_iters = 4; // subspace iterations before the first residual check
};

struct SvdResult {
    Eigen::MatrixXd u;      // m x k, orthonormal columns
    Eigen::MatrixXd v;      // n x k, orthonormal columns
    Eigen::VectorXd sigma;  // length k, descending
    double sigma_next;      // estimate of sigma_{k+1}; NaN when k = min(m,n)
    int iterations = 0;
};

// Top-k singular triplets of a sparse matrix. `at` must be the transpose of
// `a` (pass the same object for symmetric operators); both products then
// run as row-parallel kernels. Signs are fixed so the largest-magnitude
// entry of each left singular vector is positive.
//
// Throws KTooLarge when k is outside [1, min(m,n)] and NoConvergence when
// the residual bound is not met within max_iter.
SvdResult svd_top_k(const CsrMatrix& a, const CsrMatrix& at, int k,
                    const SvdOptions& opts = {});

} // namespace hcc
