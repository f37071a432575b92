#pragma once

#include "hcc/baselines.hpp"
#include "hcc/cluster.hpp"
#include "hcc/embed.hpp"
#include "hcc/ingest.hpp"
#include "hcc/synth.hpp"
#include "hcc/walk.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hcc {

inline constexpr const char* kVersion = "0.1.0";

enum class InputKind { corpus_dir, prebuilt, hypergraph, synth };
enum class Method { s_spec_1, s_spec_2, naive, bi_spec };
enum class RunSelect { best, report_all };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct InputConfig {
    InputKind kind = InputKind::synth;
    std::string path; // corpus/hypergraph directory for non-synth kinds
    SynthOptions synth;
};

struct WalkConfig {
    double alpha = 0.5;
    double tol = 1e-12;
    int max_iter = 100000;
};

struct EmbedConfig {
    int k = 4;
    SvdBackend svd = SvdBackend::randomized;
    double tol = 1e-10;
    int max_iter = 300;
};

struct ClusterConfig {
    int k = 4;
    int restarts = 10;
    int max_iter = 300;
    double tol = 1e-9;
    RunSelect select = RunSelect::best;
};

// One file describes one reproducible run: the same config (and seed)
// regenerates every artifact bit-identically.
struct RunConfig {
    std::uint64_t seed = 0;
    std::string workdir = ".";
    Method method = Method::s_spec_2;
    InputConfig input;
    IngestConfig ingest;
    std::string stopwords_path; // empty = bundled list
    WalkConfig walk;
    EmbedConfig embed;
    ClusterConfig cluster;
    bool evaluate_ncut = false;
    bool use_largest_component = false; // opt-in for disconnected inputs
    bool binary_edges = false;          // bi-spec edge weights
};

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);
void save_config(const std::string& path, const RunConfig& config);
RunConfig load_config(const std::string& path);

// Ground truth per side; -1 entries mean "no truth for this element" and
// are skipped by the metrics.
struct TruthLabels {
    std::vector<int> vertex_labels;
    std::vector<int> hyperedge_labels;
};

// Stage 1: turn the configured input into a connected hypergraph plus
// whatever ground truth the input carries. Writes the hypergraph directory
// (and, for corpus inputs, the filtered corpus) under workdir.
struct PreparedInput {
    EdvwHypergraph h;
    std::optional<TruthLabels> truth;
    std::optional<CorpusMatrix> corpus; // filtered corpus for corpus inputs
};
PreparedInput prepare_input(const RunConfig& config);

struct LabelsArtifact {
    std::vector<std::string> vertex_ids;
    std::vector<std::string> hyperedge_ids;
    std::vector<int> vertex_labels;
    std::vector<int> hyperedge_labels;
    // runs[r] = (vertex labels, hyperedge labels) for restart r
    std::vector<std::pair<std::vector<int>, std::vector<int>>> runs;
};

void write_labels_csv(const std::string& path, const LabelsArtifact& labels);
LabelsArtifact read_labels_csv(const std::string& path);

void write_truth_csv(const std::string& path, const LabelsArtifact& truth);

void write_pi_csv(const std::string& path, const Eigen::VectorXd& pi);

void write_embedding_csv(const std::string& path, const SpectralEmbedding& emb,
                         const std::vector<std::string>& vertex_ids,
                         const std::vector<std::string>& hyperedge_ids);

// Embedding read back from embedding.csv (values round-trip bit-exactly, so
// clustering a reloaded embedding equals clustering the in-memory one).
struct EmbeddingArtifact {
    SpectralEmbedding emb;
    std::vector<std::string> vertex_ids;
    std::vector<std::string> hyperedge_ids;
};
EmbeddingArtifact read_embedding_csv(const std::string& path);

// Export for external visualization tools: id,kind,cluster,truth,x1..xk.
// Unknown truth renders as an empty field.
void export_embeddings(const SpectralEmbedding& emb, const LabelsArtifact& labels,
                       const std::optional<TruthLabels>& truth,
                       const std::string& path);

struct EmbeddingExport {
    std::vector<std::string> ids;
    std::vector<std::string> kinds;
    std::vector<int> clusters;
    std::vector<int> truths; // -1 when the field was empty
    RowMatrixXd coords;
};
EmbeddingExport read_embedding_export(const std::string& path);

// FNV-1a (64-bit) content hash, hex-encoded.
std::string file_hash(const std::string& path);

// End-to-end run per the config; returns the metrics JSON. Artifacts land
// in config.workdir and manifest.json is written last, only on success.
nlohmann::json run_pipeline(const RunConfig& config);

} // namespace hcc
