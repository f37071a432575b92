#include "hcc/baselines.hpp"

#include "hcc/errors.hpp"
#include "hcc/ncut.hpp"
#include "hcc/rng.hpp"

#include <queue>
#include <string>

namespace hcc {

namespace {

RowMatrixXd to_dense_rows(const CsrMatrix& m) {
    RowMatrixXd x = RowMatrixXd::Zero(m.rows(), m.cols());
    for (index_t r = 0; r < m.rows(); ++r) {
        const auto cols = m.row_indices(r);
        const auto vals = m.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) x(r, cols[k]) += vals[k];
    }
    return x;
}

bool bipartite_connected(const CsrMatrix& b, const CsrMatrix& bt) {
    const index_t nv = b.rows();
    const index_t ne = b.cols();
    std::vector<char> seen(static_cast<std::size_t>(nv + ne), 0);
    std::queue<index_t> queue;
    seen[0] = 1;
    queue.push(0);
    index_t reached = 1;
    while (!queue.empty()) {
        const index_t node = queue.front();
        queue.pop();
        const auto neighbors =
            node < nv ? b.row_indices(node) : bt.row_indices(node - nv);
        const index_t offset = node < nv ? nv : 0;
        for (index_t other : neighbors) {
            const index_t target = other + offset;
            if (!seen[static_cast<std::size_t>(target)]) {
                seen[static_cast<std::size_t>(target)] = 1;
                ++reached;
                queue.push(target);
            }
        }
    }
    return reached == nv + ne;
}

} // namespace

BaselineResult naive_baseline(const CsrMatrix& features, int k,
                              const KmeansOptions& kmeans_opts) {
    BaselineResult out;
    out.method = "naive";
    out.k = k;
    out.seed = kmeans_opts.seed;

    const RowMatrixXd rows = to_dense_rows(features);
    const RowMatrixXd cols = to_dense_rows(features.transposed());

    KmeansOptions vertex_opts = kmeans_opts;
    KmeansOptions edge_opts = kmeans_opts;
    // Independent seeds per side; still a pure function of the root seed.
    vertex_opts.seed = child_seed(kmeans_opts.seed, 1);
    edge_opts.seed = child_seed(kmeans_opts.seed, 2);

    KmeansResult vres = kmeans(rows, k, vertex_opts);
    KmeansResult eres = kmeans(cols, k, edge_opts);
    out.vertex_labels = std::move(vres.labels);
    out.hyperedge_labels = std::move(eres.labels);
    if (kmeans_opts.keep_runs) {
        for (std::size_t r = 0; r < vres.runs.size(); ++r) {
            BaselineResult::Run run;
            run.vertex_labels = vres.runs[r].labels;
            run.hyperedge_labels = eres.runs[r].labels;
            run.inertia = vres.runs[r].inertia + eres.runs[r].inertia;
            out.runs.push_back(std::move(run));
        }
    }
    return out;
}

BaselineResult bipartite_spectral(const CsrMatrix& features, int k,
                                  const KmeansOptions& kmeans_opts,
                                  const SvdOptions& svd_opts,
                                  bool binary_edges) {
    const index_t nv = features.rows();
    const index_t ne = features.cols();

    CsrMatrix b = features;
    if (binary_edges)
        for (double& v : b.values_mut()) v = 1.0;
    const CsrMatrix bt = b.transposed();
    if (!bipartite_connected(b, bt))
        throw Disconnected("bipartite graph of the feature matrix is disconnected");

    std::vector<Triplet> adj;
    adj.reserve(static_cast<std::size_t>(2 * b.nnz()));
    for (const auto& t : b.to_triplets()) {
        adj.push_back({t.row, nv + t.col, t.value});
        adj.push_back({nv + t.col, t.row, t.value});
    }
    const CsrMatrix a_g = CsrMatrix::from_triplets(nv + ne, nv + ne, std::move(adj));

    const Eigen::MatrixXd q = relaxed_ncut_embedding(a_g, k, svd_opts);
    const RowMatrixXd x = q;
    KmeansResult km = kmeans(x, k, kmeans_opts);

    BaselineResult out;
    out.method = "bi-spec";
    out.k = k;
    out.seed = kmeans_opts.seed;
    out.vertex_labels.assign(km.labels.begin(), km.labels.begin() + nv);
    out.hyperedge_labels.assign(km.labels.begin() + nv, km.labels.end());
    if (kmeans_opts.keep_runs) {
        for (auto& run : km.runs) {
            BaselineResult::Run r;
            r.vertex_labels.assign(run.labels.begin(), run.labels.begin() + nv);
            r.hyperedge_labels.assign(run.labels.begin() + nv, run.labels.end());
            r.inertia = run.inertia;
            out.runs.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace hcc
