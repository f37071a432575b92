#pragma once

#include "hcc/hgraph.hpp"
#include "hcc/rng.hpp"
#include "hcc/sparse.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <random>
#include <vector>

namespace hcc::testing {

// Random connected EDVW hypergraph with weights in (0.5, 1.5). Membership
// starts from a path through alternating vertices/hyperedges (guarantees
// connectivity) plus random extra incidences.
inline EdvwHypergraph random_hypergraph(index_t n_vertices, index_t n_hyperedges,
                                        double density, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> weight(0.5, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Triplet> entries;
    for (index_t e = 0; e < n_hyperedges; ++e) {
        // Backbone path: hyperedge e covers vertices e and e+1 (mod |V|),
        // chaining all hyperedges together.
        entries.push_back({e, e % n_vertices, weight(rng)});
        entries.push_back({e, (e + 1) % n_vertices, weight(rng)});
        for (index_t v = 0; v < n_vertices; ++v)
            if (unit(rng) < density) entries.push_back({e, v, weight(rng)});
    }
    // Attach any vertex the path missed.
    for (index_t v = 0; v < n_vertices; ++v)
        entries.push_back({v % n_hyperedges, v, weight(rng)});
    CsrMatrix r = CsrMatrix::from_triplets(n_hyperedges, n_vertices,
                                           std::move(entries));
    Eigen::VectorXd omega(n_hyperedges);
    for (index_t e = 0; e < n_hyperedges; ++e) omega[e] = weight(rng);
    return build_hypergraph(r, omega);
}

// Largest principal angle (radians) between the column spans.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qa(a), qb(b);
    const Eigen::MatrixXd qa_thin =
        qa.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const Eigen::MatrixXd qb_thin =
        qb.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(qa_thin.transpose() * qb_thin);
    const double smallest_cos =
        std::min(1.0, svd.singularValues().minCoeff());
    return std::acos(smallest_cos);
}

// Accuracy of labels against blocks up to permutation, by exhaustive
// matching through the metrics module is avoided here; tests that need it
// include hcc/metrics.hpp directly.

} // namespace hcc::testing
