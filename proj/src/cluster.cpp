#include "hcc/cluster.hpp"

#include "hcc/errors.hpp"
#include "hcc/kernels.hpp"
#include "hcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace hcc {

namespace {

double sq_dist(const RowMatrixXd& x, index_t i, const RowMatrixXd& c, index_t j) {
    return (x.row(i) - c.row(j)).squaredNorm();
}

// k-means++ seeding. Returns true when the data ran out of distinct rows
// and centroids had to be duplicated.
bool kmeans_pp(const RowMatrixXd& x, int k, Rng& rng, RowMatrixXd& centroids) {
    const index_t n = x.rows();
    centroids.resize(k, x.cols());
    std::uniform_int_distribution<index_t> first(0, n - 1);
    centroids.row(0) = x.row(first(rng));

    Eigen::VectorXd d2(n);
    for (index_t i = 0; i < n; ++i) d2[i] = sq_dist(x, i, centroids, 0);

    bool degenerate = false;
    for (int j = 1; j < k; ++j) {
        const double total = d2.sum();
        if (!(total > 0.0)) {
            // Fewer distinct rows than k: duplicate the first centroid.
            centroids.row(j) = centroids.row(0);
            degenerate = true;
            continue;
        }
        std::uniform_real_distribution<double> pick(0.0, total);
        double target = pick(rng);
        index_t chosen = n - 1;
        for (index_t i = 0; i < n; ++i) {
            target -= d2[i];
            if (target <= 0.0) {
                chosen = i;
                break;
            }
        }
        centroids.row(j) = x.row(chosen);
        for (index_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], sq_dist(x, i, centroids, j));
    }
    return degenerate;
}

// Re-seed empty clusters one at a time at the point farthest from its
// current centroid. Donors must keep at least one point.
void repair_empty_clusters(const RowMatrixXd& x, std::vector<int>& labels,
                           RowMatrixXd& centroids, RowMatrixXd& sums,
                           std::vector<index_t>& counts) {
    const index_t n = x.rows();
    const int k = static_cast<int>(centroids.rows());
    for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) continue;
        index_t farthest = -1;
        double worst = -1.0;
        for (index_t i = 0; i < n; ++i) {
            const int li = labels[static_cast<std::size_t>(i)];
            if (counts[static_cast<std::size_t>(li)] < 2) continue;
            const double d = sq_dist(x, i, centroids, li);
            if (d > worst) {
                worst = d;
                farthest = i;
            }
        }
        if (farthest < 0) continue; // nothing stealable; cluster stays empty
        const int donor = labels[static_cast<std::size_t>(farthest)];
        labels[static_cast<std::size_t>(farthest)] = c;
        sums.row(donor) -= x.row(farthest);
        --counts[static_cast<std::size_t>(donor)];
        centroids.row(donor) =
            sums.row(donor) / static_cast<double>(counts[static_cast<std::size_t>(donor)]);
        sums.row(c) = x.row(farthest);
        counts[static_cast<std::size_t>(c)] = 1;
        centroids.row(c) = x.row(farthest);
    }
}

} // namespace

KmeansRun lloyd(const RowMatrixXd& x, RowMatrixXd centroids, int max_iter,
                double tol, std::vector<double>* inertia_trace) {
    const index_t n = x.rows();
    const int k = static_cast<int>(centroids.rows());
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd dist2(n);
    RowMatrixXd sums(k, x.cols());
    std::vector<index_t> counts(static_cast<std::size_t>(k), 0);

    for (int it = 0; it < max_iter; ++it) {
        kernels::assign_nearest(x, centroids, labels.data(), dist2.data());
        if (inertia_trace) inertia_trace->push_back(dist2.sum());

        sums.setZero();
        std::fill(counts.begin(), counts.end(), index_t{0});
        for (index_t i = 0; i < n; ++i) {
            sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        }
        RowMatrixXd next = centroids;
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<std::size_t>(c)] > 0)
                next.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);

        bool had_empty = false;
        for (int c = 0; c < k; ++c)
            had_empty |= counts[static_cast<std::size_t>(c)] == 0;
        if (had_empty) repair_empty_clusters(x, labels, next, sums, counts);

        const double shift = (next - centroids).rowwise().norm().maxCoeff();
        centroids = next;
        if (shift < tol) break;
    }

    kernels::assign_nearest(x, centroids, labels.data(), dist2.data());
    KmeansRun run;
    run.labels = std::move(labels);
    run.inertia = dist2.sum();
    return run;
}

KmeansResult kmeans(const RowMatrixXd& x, int k, const KmeansOptions& opts) {
    const index_t n = x.rows();
    if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
    if (k > n)
        throw KTooLarge("kmeans: k = " + std::to_string(k) + " > n = " +
                        std::to_string(n));
    if (opts.n_restarts < 1) throw InvalidArgument("kmeans: n_restarts >= 1");

    struct Restart {
        KmeansRun run;
        RowMatrixXd centroids;
        bool degenerate = false;
    };
    std::vector<Restart> results(static_cast<std::size_t>(opts.n_restarts));

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < opts.n_restarts; ++r) {
        Rng rng = make_rng(child_seed(opts.seed, static_cast<std::uint64_t>(r)));
        RowMatrixXd centroids;
        const bool degenerate = kmeans_pp(x, k, rng, centroids);
        KmeansRun run = lloyd(x, centroids, opts.max_iter, opts.tol, nullptr);
        results[static_cast<std::size_t>(r)] =
            {std::move(run), std::move(centroids), degenerate};
    }

    int best = 0;
    for (int r = 1; r < opts.n_restarts; ++r)
        if (results[static_cast<std::size_t>(r)].run.inertia <
            results[static_cast<std::size_t>(best)].run.inertia)
            best = r;

    KmeansResult out;
    out.labels = results[static_cast<std::size_t>(best)].run.labels;
    out.inertia = results[static_cast<std::size_t>(best)].run.inertia;
    out.best_restart = best;
    out.degenerate = false;
    for (const auto& r : results) out.degenerate |= r.degenerate;
    if (out.degenerate)
        warn("kmeans: fewer than k distinct rows; duplicated centroids");
    out.restart_inertias.reserve(results.size());
    for (const auto& r : results) out.restart_inertias.push_back(r.run.inertia);
    if (opts.keep_runs)
        for (auto& r : results) out.runs.push_back(r.run);

    // Final centroids recomputed from the winning assignment.
    out.centroids.resize(k, x.cols());
    out.centroids.setZero();
    std::vector<index_t> counts(static_cast<std::size_t>(k), 0);
    for (index_t i = 0; i < n; ++i) {
        out.centroids.row(out.labels[static_cast<std::size_t>(i)]) += x.row(i);
        ++counts[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] > 0)
            out.centroids.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    return out;
}

CoClustering co_cluster(const SpectralEmbedding& emb, int k,
                        const KmeansOptions& opts) {
    if (k < 1 || k > emb.k)
        throw InvalidArgument("co_cluster: k = " + std::to_string(k) +
                              " but embedding has " + std::to_string(emb.k) +
                              " columns");
    const RowMatrixXd x = emb.u.leftCols(k);
    KmeansResult km = kmeans(x, k, opts);

    CoClustering out;
    out.inertia = km.inertia;
    out.n_restarts = opts.n_restarts;
    out.seed = opts.seed;
    out.degenerate = km.degenerate;
    const auto nv = static_cast<std::size_t>(emb.n_vertices);
    out.vertex_labels.assign(km.labels.begin(), km.labels.begin() + nv);
    out.hyperedge_labels.assign(km.labels.begin() + nv, km.labels.end());
    out.runs = std::move(km.runs);
    return out;
}

} // namespace hcc
