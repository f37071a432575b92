#include "hcc/synth.hpp"

#include "hcc/errors.hpp"
#include "hcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

namespace hcc {

namespace {

int block_of(index_t i, index_t n, int n_blocks) {
    // Contiguous near-equal ranges.
    return static_cast<int>((i * n_blocks) / n);
}

} // namespace

PlantedHypergraph planted_hypergraph(const SynthOptions& opts) {
    if (opts.n_blocks < 1 || opts.n_vertices < opts.n_blocks ||
        opts.n_hyperedges < opts.n_blocks)
        throw InvalidArgument("planted_hypergraph: need at least one vertex and "
                              "hyperedge per block");
    Rng rng = make_rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> gamma(opts.gamma_lo, opts.gamma_hi);

    PlantedHypergraph out;
    out.vertex_blocks.resize(static_cast<std::size_t>(opts.n_vertices));
    out.hyperedge_blocks.resize(static_cast<std::size_t>(opts.n_hyperedges));
    for (index_t v = 0; v < opts.n_vertices; ++v)
        out.vertex_blocks[static_cast<std::size_t>(v)] =
            block_of(v, opts.n_vertices, opts.n_blocks);
    for (index_t e = 0; e < opts.n_hyperedges; ++e)
        out.hyperedge_blocks[static_cast<std::size_t>(e)] =
            block_of(e, opts.n_hyperedges, opts.n_blocks);

    std::map<std::pair<index_t, index_t>, double> entries;
    for (index_t e = 0; e < opts.n_hyperedges; ++e) {
        const int be = out.hyperedge_blocks[static_cast<std::size_t>(e)];
        double edge_scale = 1.0;
        if (opts.mode == SynthMode::edvw_signal && opts.edge_scale_spread > 1.0)
            edge_scale = std::exp(unit(rng) * std::log(opts.edge_scale_spread));
        for (index_t v = 0; v < opts.n_vertices; ++v) {
            const bool same = out.vertex_blocks[static_cast<std::size_t>(v)] == be;
            double p = 0.0;
            double scale = edge_scale;
            if (opts.mode == SynthMode::membership) {
                p = same ? opts.p_in : opts.p_out;
            } else {
                p = opts.membership_p;
                if (same) scale *= opts.edvw_contrast;
            }
            if (unit(rng) < p) entries[{e, v}] = scale * gamma(rng);
        }
    }

    // Deterministic repairs: every hyperedge and vertex must have support,
    // and the incidence must form one component.
    for (index_t e = 0; e < opts.n_hyperedges; ++e) {
        bool any = false;
        for (index_t v = 0; v < opts.n_vertices && !any; ++v)
            any = entries.count({e, v}) > 0;
        if (!any) {
            const int be = out.hyperedge_blocks[static_cast<std::size_t>(e)];
            for (index_t v = 0; v < opts.n_vertices; ++v) {
                if (out.vertex_blocks[static_cast<std::size_t>(v)] == be) {
                    entries[{e, v}] = gamma(rng);
                    break;
                }
            }
        }
    }
    {
        std::vector<char> covered(static_cast<std::size_t>(opts.n_vertices), 0);
        for (const auto& [key, value] : entries)
            covered[static_cast<std::size_t>(key.second)] = 1;
        for (index_t v = 0; v < opts.n_vertices; ++v) {
            if (covered[static_cast<std::size_t>(v)]) continue;
            const int bv = out.vertex_blocks[static_cast<std::size_t>(v)];
            for (index_t e = 0; e < opts.n_hyperedges; ++e) {
                if (out.hyperedge_blocks[static_cast<std::size_t>(e)] == bv) {
                    entries[{e, v}] = gamma(rng);
                    break;
                }
            }
        }
    }

    const auto build = [&](bool allow_disconnected) {
        std::vector<Triplet> trip;
        trip.reserve(entries.size());
        for (const auto& [key, value] : entries)
            trip.push_back({key.first, key.second, value});
        const CsrMatrix r = CsrMatrix::from_triplets(opts.n_hyperedges,
                                                     opts.n_vertices,
                                                     std::move(trip));
        Eigen::VectorXd omega = Eigen::VectorXd::Ones(opts.n_hyperedges);
        return build_hypergraph(r, omega, allow_disconnected);
    };

    EdvwHypergraph h = build(true);
    if (!validate_connected(h)) {
        // Chain the components together through their lowest-index vertices.
        int n_comp = 0;
        // Reuse largest_component machinery indirectly: link first vertex of
        // each leftover component to the first hyperedge overall.
        while (!validate_connected(h)) {
            const ComponentExtraction main = largest_component(h);
            std::vector<char> in_main(static_cast<std::size_t>(opts.n_vertices), 0);
            for (index_t v : main.vertex_ids) in_main[static_cast<std::size_t>(v)] = 1;
            index_t outsider = -1;
            for (index_t v = 0; v < opts.n_vertices; ++v) {
                if (!in_main[static_cast<std::size_t>(v)]) {
                    outsider = v;
                    break;
                }
            }
            if (outsider < 0) break;
            entries[{main.hyperedge_ids.front(), outsider}] = gamma(rng);
            h = build(true);
            if (++n_comp > opts.n_blocks * 4) break;
        }
    }
    out.h = build(false);
    return out;
}

CorpusMatrix synthetic_corpus(const SynthCorpusOptions& opts) {
    if (opts.n_classes < 1 || opts.n_docs < opts.n_classes)
        throw InvalidArgument("synthetic_corpus: need at least one doc per class");
    if (opts.class_vocab * opts.n_classes > opts.vocab_size)
        throw InvalidArgument("synthetic_corpus: class vocabularies exceed vocab_size");
    Rng rng = make_rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const index_t shared = opts.vocab_size - opts.class_vocab * opts.n_classes;
    // Zipf-ish weights inside each word pool.
    const auto pool_word = [&](index_t pool_size) {
        const double u = unit(rng);
        const double x = std::pow(static_cast<double>(pool_size) + 1.0, u) - 1.0;
        return std::min<index_t>(static_cast<index_t>(x), pool_size - 1);
    };

    std::vector<Triplet> entries;
    std::vector<int> labels;
    std::poisson_distribution<index_t> length(static_cast<double>(opts.doc_length));
    for (index_t d = 0; d < opts.n_docs; ++d) {
        const int c = static_cast<int>((d * opts.n_classes) / opts.n_docs);
        labels.push_back(c);
        const index_t len = std::max<index_t>(20, length(rng));
        std::map<index_t, double> doc_counts;
        for (index_t t = 0; t < len; ++t) {
            index_t w;
            if (shared > 0 && unit(rng) < opts.background_mix) {
                w = opts.class_vocab * opts.n_classes + pool_word(shared);
            } else {
                w = static_cast<index_t>(c) * opts.class_vocab +
                    pool_word(opts.class_vocab);
            }
            doc_counts[w] += 1.0;
        }
        for (const auto& [w, count] : doc_counts) entries.push_back({d, w, count});
    }

    CorpusMatrix cm;
    cm.counts = CsrMatrix::from_triplets(opts.n_docs, opts.vocab_size,
                                         std::move(entries));
    for (index_t d = 0; d < opts.n_docs; ++d)
        cm.doc_ids.push_back("doc" + std::to_string(d));
    for (index_t w = 0; w < opts.vocab_size; ++w)
        cm.vocab.push_back("word" + std::to_string(w));
    cm.doc_labels = labels;
    for (int c = 0; c < opts.n_classes; ++c)
        cm.class_names.push_back("class" + std::to_string(c));
    return cm;
}

} // namespace hcc
