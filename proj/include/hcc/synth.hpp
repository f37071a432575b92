#pragma once

#include "hcc/hgraph.hpp"
#include "hcc/ingest.hpp"

#include <cstdint>
#include <vector>

namespace hcc {

enum class SynthMode {
    membership,  // block structure in which vertices join which hyperedges
    edvw_signal, // uniform membership; block structure only in the weights
};

struct SynthOptions {
    index_t n_vertices = 400;
    index_t n_hyperedges = 300;
    int n_blocks = 4;
    SynthMode mode = SynthMode::membership;
    double p_in = 0.3;   // membership prob within the hyperedge's block
    double p_out = 0.01; // membership prob across blocks
    double gamma_lo = 0.5; // vertex-weight base range
    double gamma_hi = 1.5;
    // edvw_signal mode: every pair joins with membership_p; same-block
    // weights are multiplied by edvw_contrast, and every weight in
    // hyperedge e is multiplied by a random scale s_e drawn log-uniformly
    // from [1, edge_scale_spread]. Within-edge relative weights (what the
    // walk sees) are unaffected by s_e; flat treatments of the weight
    // matrix are not.
    double membership_p = 0.15;
    double edvw_contrast = 3.0;
    double edge_scale_spread = 1.0;
    std::uint64_t seed = 0;
};

struct PlantedHypergraph {
    EdvwHypergraph h;
    std::vector<int> vertex_blocks;
    std::vector<int> hyperedge_blocks;
};

// Seeded planted co-cluster generator. Blocks are contiguous index ranges
// of near-equal size. The construction is repaired deterministically so
// the result is always a valid connected hypergraph.
PlantedHypergraph planted_hypergraph(const SynthOptions& opts);

struct SynthCorpusOptions {
    index_t n_docs = 8000;
    index_t vocab_size = 2600;
    int n_classes = 8;
    index_t class_vocab = 250;    // words favored by each class
    index_t doc_length = 120;     // tokens per document (expected)
    double background_mix = 0.35; // probability mass on shared words
    std::uint64_t seed = 0;
};

// Multinomial bag-of-words corpus with class-specific vocabularies, used
// to exercise the ingestion pipeline at realistic scale.
CorpusMatrix synthetic_corpus(const SynthCorpusOptions& opts);

} // namespace hcc
