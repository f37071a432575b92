#include "hcc/hgraph.hpp"

#include "hcc/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <sstream>

namespace hcc {

namespace {

// BFS over the bipartite incidence; nodes 0..|V|-1 are vertices, then
// hyperedges. Returns component id per node.
std::vector<int> incidence_components(const EdvwHypergraph& h, int* n_components) {
    const index_t nv = h.n_vertices;
    const index_t ne = h.n_hyperedges;
    std::vector<int> comp(static_cast<std::size_t>(nv + ne), -1);
    int next = 0;
    std::queue<index_t> queue;
    for (index_t start = 0; start < nv + ne; ++start) {
        if (comp[static_cast<std::size_t>(start)] >= 0) continue;
        comp[static_cast<std::size_t>(start)] = next;
        queue.push(start);
        while (!queue.empty()) {
            const index_t node = queue.front();
            queue.pop();
            if (node < nv) {
                for (index_t e : h.w.row_indices(node)) {
                    if (comp[static_cast<std::size_t>(nv + e)] < 0) {
                        comp[static_cast<std::size_t>(nv + e)] = next;
                        queue.push(nv + e);
                    }
                }
            } else {
                for (index_t v : h.r.row_indices(node - nv)) {
                    if (comp[static_cast<std::size_t>(v)] < 0) {
                        comp[static_cast<std::size_t>(v)] = next;
                        queue.push(v);
                    }
                }
            }
        }
        ++next;
    }
    if (n_components) *n_components = next;
    return comp;
}

} // namespace

EdvwHypergraph build_hypergraph(const CsrMatrix& r, const Eigen::VectorXd& omega,
                                bool allow_disconnected) {
    const index_t ne = r.rows();
    const index_t nv = r.cols();
    if (ne == 0 || nv == 0)
        throw EmptyRowOrColumn("hypergraph needs at least one vertex and one hyperedge");
    if (omega.size() != ne)
        throw LengthMismatch("omega length " + std::to_string(omega.size()) +
                             " != |E| = " + std::to_string(ne));
    for (index_t e = 0; e < ne; ++e) {
        if (!(omega[e] > 0.0) || !std::isfinite(omega[e]))
            throw NonPositiveWeight("omega[" + std::to_string(e) + "] = " +
                                    std::to_string(omega[e]));
    }

    std::vector<Triplet> r_entries;
    std::vector<Triplet> w_entries;
    r_entries.reserve(static_cast<std::size_t>(r.nnz()));
    w_entries.reserve(static_cast<std::size_t>(r.nnz()));
    for (index_t e = 0; e < ne; ++e) {
        const auto cols = r.row_indices(e);
        const auto vals = r.row_values(e);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const double g = vals[k];
            if (g == 0.0) continue; // zero weight reads as non-membership
            if (g < 0.0 || !std::isfinite(g))
                throw NonPositiveWeight("R[" + std::to_string(e) + "," +
                                        std::to_string(cols[k]) + "] = " +
                                        std::to_string(g));
            r_entries.push_back({e, cols[k], g});
            w_entries.push_back({cols[k], e, omega[e]});
        }
    }

    EdvwHypergraph h;
    h.n_vertices = nv;
    h.n_hyperedges = ne;
    h.r = CsrMatrix::from_triplets(ne, nv, std::move(r_entries));
    h.w = CsrMatrix::from_triplets(nv, ne, std::move(w_entries));
    h.omega = omega;

    for (index_t e = 0; e < ne; ++e)
        if (h.r.row_indices(e).empty())
            throw EmptyRowOrColumn("hyperedge " + std::to_string(e) + " is empty");
    for (index_t v = 0; v < nv; ++v)
        if (h.w.row_indices(v).empty())
            throw EmptyRowOrColumn("vertex " + std::to_string(v) +
                                   " belongs to no hyperedge");

    if (!allow_disconnected && !validate_connected(h))
        throw Disconnected("hypergraph incidence has more than one component");
    return h;
}

bool validate_connected(const EdvwHypergraph& h) {
    int n = 0;
    incidence_components(h, &n);
    return n == 1;
}

ComponentExtraction largest_component(const EdvwHypergraph& h) {
    int n_comp = 0;
    const std::vector<int> comp = incidence_components(h, &n_comp);
    const index_t nv = h.n_vertices;

    std::vector<index_t> size(static_cast<std::size_t>(n_comp), 0);
    for (int c : comp) ++size[static_cast<std::size_t>(c)];
    // Ties resolved toward the component holding the lowest vertex index;
    // vertices come first in `comp`, so the first max over vertex order works.
    int best = 0;
    for (index_t v = 0; v < nv; ++v) {
        const int c = comp[static_cast<std::size_t>(v)];
        if (size[static_cast<std::size_t>(c)] > size[static_cast<std::size_t>(best)])
            best = c;
    }

    ComponentExtraction out;
    std::vector<index_t> vmap(static_cast<std::size_t>(nv), -1);
    std::vector<index_t> emap(static_cast<std::size_t>(h.n_hyperedges), -1);
    for (index_t v = 0; v < nv; ++v) {
        if (comp[static_cast<std::size_t>(v)] == best) {
            vmap[static_cast<std::size_t>(v)] = static_cast<index_t>(out.vertex_ids.size());
            out.vertex_ids.push_back(v);
        }
    }
    for (index_t e = 0; e < h.n_hyperedges; ++e) {
        if (comp[static_cast<std::size_t>(nv + e)] == best) {
            emap[static_cast<std::size_t>(e)] = static_cast<index_t>(out.hyperedge_ids.size());
            out.hyperedge_ids.push_back(e);
        }
    }

    std::vector<Triplet> r_entries;
    Eigen::VectorXd omega(static_cast<index_t>(out.hyperedge_ids.size()));
    for (std::size_t en = 0; en < out.hyperedge_ids.size(); ++en) {
        const index_t e = out.hyperedge_ids[en];
        omega[static_cast<index_t>(en)] = h.omega[e];
        const auto cols = h.r.row_indices(e);
        const auto vals = h.r.row_values(e);
        for (std::size_t k = 0; k < cols.size(); ++k)
            r_entries.push_back({static_cast<index_t>(en),
                                 vmap[static_cast<std::size_t>(cols[k])], vals[k]});
    }
    CsrMatrix r = CsrMatrix::from_triplets(static_cast<index_t>(out.hyperedge_ids.size()),
                                           static_cast<index_t>(out.vertex_ids.size()),
                                           std::move(r_entries));
    out.h = build_hypergraph(r, omega);
    if (!h.vertex_names.empty()) {
        for (index_t v : out.vertex_ids)
            out.h.vertex_names.push_back(h.vertex_names[static_cast<std::size_t>(v)]);
    }
    if (!h.hyperedge_names.empty()) {
        for (index_t e : out.hyperedge_ids)
            out.h.hyperedge_names.push_back(h.hyperedge_names[static_cast<std::size_t>(e)]);
    }
    return out;
}

void save_hypergraph(const std::string& dir, const EdvwHypergraph& h) {
    std::filesystem::create_directories(dir);
    write_matrix_market(dir + "/R.mtx", h.r);

    std::ofstream om(dir + "/omega.csv");
    if (!om) throw IOFailure("cannot write " + dir + "/omega.csv");
    om << "omega\n";
    char buf[64];
    for (index_t e = 0; e < h.n_hyperedges; ++e) {
        std::snprintf(buf, sizeof(buf), "%.17g", h.omega[e]);
        om << buf << "\n";
    }

    if (!h.vertex_names.empty() || !h.hyperedge_names.empty()) {
        nlohmann::json j;
        j["vertex_names"] = h.vertex_names;
        j["hyperedge_names"] = h.hyperedge_names;
        std::ofstream nm(dir + "/names.json");
        if (!nm) throw IOFailure("cannot write " + dir + "/names.json");
        nm << j.dump(2) << "\n";
    }
}

EdvwHypergraph load_hypergraph(const std::string& dir, bool allow_disconnected) {
    CsrMatrix r = read_matrix_market(dir + "/R.mtx");

    std::ifstream om(dir + "/omega.csv");
    if (!om) throw IOFailure("cannot open " + dir + "/omega.csv");
    std::string line;
    if (!std::getline(om, line) || line != "omega")
        throw IOFailure("omega.csv must start with an 'omega' header");
    std::vector<double> vals;
    while (std::getline(om, line)) {
        if (line.empty()) continue;
        vals.push_back(std::stod(line));
    }
    Eigen::VectorXd omega(static_cast<index_t>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        omega[static_cast<index_t>(i)] = vals[i];

    EdvwHypergraph h = build_hypergraph(r, omega, allow_disconnected);

    const std::string names_path = dir + "/names.json";
    if (std::filesystem::exists(names_path)) {
        std::ifstream nm(names_path);
        nlohmann::json j;
        nm >> j;
        h.vertex_names = j.value("vertex_names", std::vector<std::string>{});
        h.hyperedge_names = j.value("hyperedge_names", std::vector<std::string>{});
    }
    return h;
}

} // namespace hcc
