#pragma once

#include "hcc/sparse.hpp"

#include <string>
#include <vector>

namespace hcc {

// Hypergraph with edge-dependent vertex weights.
//
// r is |E| x |V| with r(e,v) > 0 exactly when vertex v belongs to hyperedge
// e (the per-edge vertex weight); w is |V| x |E| with w(v,e) = omega(e) on
// the same support, so both matrices encode the incidence structure and
// downstream operators are pure matrix reads. Instances are immutable after
// construction and safe to share across threads.
struct EdvwHypergraph {
    index_t n_vertices = 0;
    index_t n_hyperedges = 0;
    CsrMatrix r;            // |E| x |V|, edge-dependent vertex weights
    CsrMatrix w;            // |V| x |E|, hyperedge weights on the incidence
    Eigen::VectorXd omega;  // |E|, one positive weight per hyperedge
    std::vector<std::string> vertex_names;    // optional, empty when unnamed
    std::vector<std::string> hyperedge_names; // optional
};

// Validating constructor. Rejects empty rows/columns, non-positive weights,
// and (unless allow_disconnected) hypergraphs whose bipartite incidence is
// not a single connected component. Entries of r that are exactly zero are
// treated as non-membership and dropped.
EdvwHypergraph build_hypergraph(const CsrMatrix& r, const Eigen::VectorXd& omega,
                                bool allow_disconnected = false);

// True iff a BFS over the bipartite vertex-hyperedge incidence reaches all
// |V| + |E| nodes.
bool validate_connected(const EdvwHypergraph& h);

struct ComponentExtraction {
    EdvwHypergraph h;
    std::vector<index_t> vertex_ids;    // new vertex index -> original index
    std::vector<index_t> hyperedge_ids; // new hyperedge index -> original index
};

// Restriction to the largest connected component (vertices + hyperedges
// counted together). Ties go to the component containing the lowest
// original vertex index.
ComponentExtraction largest_component(const EdvwHypergraph& h);

// Directory layout: R.mtx (Matrix Market), omega.csv (single `omega`
// column), names.json (only when names are present).
void save_hypergraph(const std::string& dir, const EdvwHypergraph& h);
EdvwHypergraph load_hypergraph(const std::string& dir,
                               bool allow_disconnected = false);

} // namespace hcc
