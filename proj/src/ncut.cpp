#include "hcc/ncut.hpp"

#include "hcc/errors.hpp"

#include <cmath>
#include <string>

namespace hcc {

namespace {

void check_partition(index_t n, const std::vector<int>& labels, int k) {
    if (static_cast<index_t>(labels.size()) != n)
        throw LengthMismatch("partition labels length != number of nodes");
    if (k < 1) throw InvalidArgument("partition needs k >= 1");
    std::vector<index_t> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) {
        if (l < 0 || l >= k)
            throw InvalidArgument("label " + std::to_string(l) +
                                  " outside [0," + std::to_string(k) + ")");
        ++counts[static_cast<std::size_t>(l)];
    }
    for (int c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw EmptyCluster("cluster " + std::to_string(c) + " is empty");
}

} // namespace

CutVolume cut_and_vol(const CsrMatrix& a_g, const std::vector<int>& labels, int k) {
    if (a_g.rows() != a_g.cols())
        throw InvalidArgument("adjacency must be square");
    const index_t n = a_g.rows();
    check_partition(n, labels, k);

    CutVolume out;
    out.cut = Eigen::VectorXd::Zero(k);
    out.vol = Eigen::VectorXd::Zero(k);
    for (index_t u = 0; u < n; ++u) {
        const int lu = labels[static_cast<std::size_t>(u)];
        const auto cols = a_g.row_indices(u);
        const auto vals = a_g.row_values(u);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out.vol[lu] += vals[i];
            if (labels[static_cast<std::size_t>(cols[i])] != lu)
                out.cut[lu] += vals[i];
        }
    }
    return out;
}

double ncut(const CsrMatrix& a_g, const std::vector<int>& labels, int k) {
    const CutVolume cv = cut_and_vol(a_g, labels, k);
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
        if (!(cv.vol[c] > 0.0))
            throw EmptyCluster("cluster " + std::to_string(c) +
                               " has zero volume");
        total += cv.cut[c] / cv.vol[c];
    }
    return total;
}

Eigen::MatrixXd partition_indicator(const CsrMatrix& a_g,
                                    const std::vector<int>& labels, int k) {
    const CutVolume cv = cut_and_vol(a_g, labels, k);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(a_g.rows(), k);
    for (index_t v = 0; v < a_g.rows(); ++v) {
        const int c = labels[static_cast<std::size_t>(v)];
        if (!(cv.vol[c] > 0.0))
            throw EmptyCluster("cluster " + std::to_string(c) +
                               " has zero volume");
        q(v, c) = 1.0 / std::sqrt(cv.vol[c]);
    }
    return q;
}

Eigen::MatrixXd relaxed_ncut_embedding(const CsrMatrix& a_g, int k,
                                       const SvdOptions& opts) {
    if (a_g.rows() != a_g.cols())
        throw InvalidArgument("adjacency must be square");
    const index_t n = a_g.rows();
    const Eigen::VectorXd deg = a_g.row_sums();
    Eigen::VectorXd inv_sqrt(n);
    for (index_t i = 0; i < n; ++i) {
        if (!(deg[i] > 0.0))
            throw ZeroRowSum("node " + std::to_string(i) + " has zero degree");
        inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
    }

    // M = I + D^{-1/2} A D^{-1/2} is PSD; its top-k eigenvectors are the
    // normalized-Laplacian eigenvectors for the k smallest eigenvalues.
    CsrMatrix m = a_g;
    m.scale_rows(inv_sqrt);
    m.scale_cols(inv_sqrt);
    m = csr_add(1.0, m, 1.0, CsrMatrix::identity(n));

    const SvdResult svd = svd_top_k(m, m, k, opts);
    Eigen::MatrixXd q(n, k);
    for (index_t i = 0; i < n; ++i) q.row(i) = svd.u.row(i) * inv_sqrt[i];
    return q;
}

} // namespace hcc
