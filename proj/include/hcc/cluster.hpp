#pragma once

#include "hcc/embed.hpp"
#include "hcc/sparse.hpp"

#include <cstdint>
#include <vector>

namespace hcc {

struct KmeansOptions {
    int n_restarts = 10;
    int max_iter = 300;
    double tol = 1e-9; // max centroid shift that counts as converged
    std::uint64_t seed = 0;
    bool keep_runs = false; // retain every restart's labels and inertia
};

struct KmeansRun {
    std::vector<int> labels;
    double inertia = 0.0;
};

struct KmeansResult {
    std::vector<int> labels;
    RowMatrixXd centroids; // k x d
    double inertia = 0.0;
    int best_restart = 0;
    std::vector<double> restart_inertias;
    std::vector<KmeansRun> runs; // filled when keep_runs
    bool degenerate = false;     // fewer distinct rows than k
};

// Lloyd's algorithm with k-means++ seeding and best-of-restarts selection.
// Restart r draws all randomness from child_seed(seed, r), so results do
// not depend on thread scheduling; ties in inertia go to the lowest restart
// index. Empty clusters are re-seeded one at a time at the point farthest
// from its current centroid.
KmeansResult kmeans(const RowMatrixXd& x, int k, const KmeansOptions& opts = {});

// Single Lloyd run from explicit starting centroids (exposed for tests of
// the empty-cluster repair and the inertia monotonicity).
KmeansRun lloyd(const RowMatrixXd& x, RowMatrixXd centroids, int max_iter,
                double tol, std::vector<double>* inertia_trace = nullptr);

struct CoClustering {
    std::vector<int> vertex_labels;
    std::vector<int> hyperedge_labels;
    double inertia = 0.0;
    int n_restarts = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;
    std::vector<KmeansRun> runs; // joint labels per restart when kept
};

// One k-means over all |V|+|E| embedding rows jointly; the label vector is
// split back into its vertex and hyperedge parts.
CoClustering co_cluster(const SpectralEmbedding& emb, int k,
                        const KmeansOptions& opts = {});

} // namespace hcc
