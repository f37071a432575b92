#pragma once

#include "hcc/hgraph.hpp"
#include "hcc/sparse.hpp"

#include <set>
#include <string>
#include <vector>

namespace hcc {

// Document-term counts plus the id/label sidecars needed for evaluation.
struct CorpusMatrix {
    CsrMatrix counts; // n_docs x n_words, raw nonnegative counts
    std::vector<std::string> vocab;
    std::vector<std::string> doc_ids;
    std::vector<int> doc_labels;            // empty when unlabeled
    std::vector<std::string> class_names;   // label id -> original label string
};

enum class TfidfVariant { smooth, plain };
enum class WeightStd { all_entries, nonzero };
enum class Direction { docs_as_vertices, words_as_vertices };

struct IngestConfig {
    double max_df = 0.20;  // words in more than this fraction of docs go
    double min_df = 0.002; // words in fewer than this fraction of docs go
    index_t vocab_size = 2000;
    std::set<std::string> stopwords; // empty set = use the bundled list
    TfidfVariant tfidf_variant = TfidfVariant::smooth;
    WeightStd weight_std = WeightStd::all_entries;
    Direction direction = Direction::docs_as_vertices;
};

void validate_config(const IngestConfig& config);

// Bundled English stopword list (data/stopwords_en.txt, compiled in).
const std::set<std::string>& default_stopwords();
std::set<std::string> load_stopwords(const std::string& path);

// Lowercase, split on non-alphanumeric runs, drop tokens shorter than two
// characters and stopwords, count occurrences. Documents left without
// tokens are dropped with a warning.
CorpusMatrix tokenize_corpus(const std::vector<std::string>& docs,
                             const std::vector<std::string>& doc_ids,
                             const std::vector<int>& doc_labels,
                             const IngestConfig& config);

// Document-frequency filter (strict > max_df and < min_df removal, so
// at-threshold words stay) followed by a total-frequency cap at
// vocab_size. Documents that become empty are dropped and reported.
CorpusMatrix filter_vocabulary(const CorpusMatrix& cm, const IngestConfig& config);

// Raw term frequency times inverse document frequency.
// smooth: idf = ln((1+n)/(1+df)) + 1;  plain: idf = ln(n/df) + 1.
CsrMatrix tfidf(const CorpusMatrix& cm, TfidfVariant variant = TfidfVariant::smooth);

struct TextHypergraphResult {
    EdvwHypergraph h; // built allow_disconnected; connectivity policy is the caller's
    std::vector<index_t> vertex_ids;    // vertex index -> original doc/word index
    std::vector<index_t> hyperedge_ids; // hyperedge index -> original word/doc index
    index_t dropped_hyperedges = 0;     // zero-std rows
    index_t dropped_vertices = 0;       // isolated after hyperedge drops
};

// EDVW hypergraph from a tf-idf matrix (n_docs x n_words). With
// docs_as_vertices the weighting matrix is the transpose (words become
// hyperedges); with words_as_vertices the roles swap. Hyperedge weights
// are the standard deviation of the corresponding weighting-matrix row
// (population form; all |V| entries by default, nonzero entries when
// configured); zero-std hyperedges are dropped with a warning.
TextHypergraphResult build_text_hypergraph(const CsrMatrix& tfidf_matrix,
                                           Direction direction,
                                           WeightStd weight_std = WeightStd::all_entries);

// Directory of .txt files (sorted by filename) with a labels.csv sidecar
// mapping file stem -> class label.
CorpusMatrix load_corpus_dir(const std::string& dir, const IngestConfig& config);

// Prebuilt counts.mtx + vocab.txt (+ labels.csv, one row per document).
CorpusMatrix load_prebuilt_corpus(const std::string& dir);

void save_corpus(const std::string& dir, const CorpusMatrix& cm);

} // namespace hcc
