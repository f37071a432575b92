#pragma once

#include "hcc/hgraph.hpp"
#include "hcc/sparse.hpp"

namespace hcc {

// Random-walk operators on the star expansion of an EDVW hypergraph.
// States 0..|V|-1 are vertices, |V|..|V|+|E|-1 are hyperedges.
struct WalkOperators {
    CsrMatrix p_ve;   // |V| x |E| row-stochastic, vertex -> hyperedge
    CsrMatrix p_ev;   // |E| x |V| row-stochastic, hyperedge -> vertex
    CsrMatrix p_ve_t; // transposes kept so every product is a row-parallel spmv
    CsrMatrix p_ev_t;
    double alpha = 0.5;    // laziness of the walk, in (0,1)
    Eigen::VectorXd pi;    // stationary distribution, length |V|+|E|, ||pi||_1 = 1
    Eigen::VectorXd phi_v; // pi restricted to vertices (diagonal of Phi_V)
    Eigen::VectorXd phi_e; // pi restricted to hyperedges
    index_t n_vertices = 0;
    index_t n_hyperedges = 0;
};

struct HypergraphLaplacians {
    CsrMatrix l;      // combinatorial: diag(pi) - a
    CsrMatrix l_norm; // normalized: diag(pi)^{-1/2} l diag(pi)^{-1/2}
    CsrMatrix a;      // induced undirected adjacency; a*1 = pi
};

// Row-normalized copies of W (vertex side) and R (hyperedge side).
std::pair<CsrMatrix, CsrMatrix> transition_matrices(const EdvwHypergraph& h);

// Full (|V|+|E|)^2 chain with zero diagonal blocks.
CsrMatrix block_transition(const CsrMatrix& p_ve, const CsrMatrix& p_ev);

// (1-alpha) I + alpha P. Throws AlphaOutOfRange unless 0 < alpha < 1.
CsrMatrix lazy_walk(const CsrMatrix& p, double alpha);

struct StationaryOptions {
    double tol = 1e-12;  // bound on || pi^T P - pi^T ||_1 at exit
    int max_iter = 100000;
    // Laziness used inside the iteration only. The fixed point is the same
    // for every choice, so the caller's walk alpha never enters and the
    // computed pi is bit-identical across pipeline alphas.
    double device_alpha = 0.5;
};

// Power iteration for the stationary distribution of the lazy walk. Each
// step renormalizes the vertex and hyperedge blocks to mass 1/2 (the exact
// block masses of the fixed point). Throws NoConvergence when tol is not
// reached within max_iter.
Eigen::VectorXd stationary_distribution(const CsrMatrix& p_ve, const CsrMatrix& p_ev,
                                        const StationaryOptions& opts = {});

// Dense linear solve of pi^T (P_alpha - I) = 0 with sum(pi) = 1. Exact up
// to factorization roundoff; intended as the cross-check path for small
// instances (|V|+|E| <= ~2000).
Eigen::VectorXd stationary_exact(const CsrMatrix& p_ve, const CsrMatrix& p_ev,
                                 double alpha);

WalkOperators build_walk(const EdvwHypergraph& h, double alpha = 0.5,
                         const StationaryOptions& opts = {});

HypergraphLaplacians laplacians(const WalkOperators& walk);

} // namespace hcc
