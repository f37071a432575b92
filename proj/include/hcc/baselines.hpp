#pragma once

#include "hcc/cluster.hpp"
#include "hcc/sparse.hpp"
#include "hcc/svd.hpp"

#include <string>
#include <vector>

namespace hcc {

// A comparison method's joint labeling. Both sides are always present:
// bi-spec co-clusters in one k-means, the naive method clusters each side
// independently (runs are paired by restart index).
struct BaselineResult {
    std::string method;
    std::vector<int> vertex_labels;
    std::vector<int> hyperedge_labels;
    int k = 0;
    std::uint64_t seed = 0;
    struct Run {
        std::vector<int> vertex_labels;
        std::vector<int> hyperedge_labels;
        double inertia = 0.0;
    };
    std::vector<Run> runs; // per restart when keep_runs
};

// k-means directly on the rows (vertex side) and columns (hyperedge side)
// of the feature matrix. `features` is |V| x |E|; for text pipelines this
// is the tf-idf matrix with documents as rows.
BaselineResult naive_baseline(const CsrMatrix& features, int k,
                              const KmeansOptions& kmeans_opts = {});

// Bipartite spectral partitioning: the feature matrix defines an
// undirected bipartite graph [[0, B], [B^T, 0]] (binary_edges drops the
// weights), the relaxed Ncut embedding of that graph is clustered jointly.
// Throws Disconnected when the bipartite graph is not connected.
BaselineResult bipartite_spectral(const CsrMatrix& features, int k,
                                  const KmeansOptions& kmeans_opts = {},
                                  const SvdOptions& svd_opts = {},
                                  bool binary_edges = false);

} // namespace hcc
