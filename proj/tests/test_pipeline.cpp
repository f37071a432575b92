#include "hcc/pipeline.hpp"

#include "hcc/errors.hpp"
#include "hcc/rng.hpp"
#include "hcc/synth.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace hcc;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

// Small labeled corpus with two obvious topics.
void write_fixture_corpus(const std::string& dir) {
    fs::create_directories(dir);
    // "analysis" bridges the two topics so the hypergraph stays connected.
    const std::vector<std::pair<std::string, std::string>> docs = {
        {"g0", "spectral graphs laplacian eigenvectors partitioning analysis"},
        {"g1", "graphs partitioning cuts laplacian spectra"},
        {"g2", "eigenvectors laplacian graphs cuts"},
        {"g3", "partitioning spectra eigenvectors graphs"},
        {"c0", "tokenizer corpus words documents frequency analysis"},
        {"c1", "documents corpus frequency vocabulary words"},
        {"c2", "words tokenizer vocabulary documents corpus"},
        {"c3", "frequency vocabulary tokenizer documents"},
    };
    std::ofstream labels(dir + "/labels.csv");
    labels << "id,label\n";
    for (const auto& [id, text] : docs) {
        std::ofstream(dir + "/" + id + ".txt") << text;
        labels << id << "," << (id[0] == 'g' ? "graphs" : "corpora") << "\n";
    }
}

RunConfig fixture_config(const std::string& corpus, const std::string& workdir) {
    RunConfig config;
    config.seed = 7;
    config.workdir = workdir;
    config.method = Method::s_spec_2;
    config.input.kind = InputKind::corpus_dir;
    config.input.path = corpus;
    config.ingest.min_df = 0.05;
    config.ingest.max_df = 1.0;
    config.embed.k = 2;
    config.cluster.k = 2;
    config.cluster.restarts = 5;
    return config;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config round-trips through JSON") {
    RunConfig config;
    config.seed = 99;
    config.method = Method::bi_spec;
    config.input.kind = InputKind::prebuilt;
    config.input.path = "/data/corpus";
    config.input.synth.n_blocks = 7;
    config.input.synth.mode = SynthMode::edvw_signal;
    config.ingest.max_df = 0.4;
    config.ingest.direction = Direction::words_as_vertices;
    config.walk.alpha = 0.25;
    config.embed.svd = SvdBackend::lanczos;
    config.embed.k = 9;
    config.cluster.select = RunSelect::report_all;
    config.evaluate_ncut = true;
    config.binary_edges = true;

    const TempDir tmp("hcc_test_config");
    const std::string path = tmp.str() + "/config.json";
    save_config(path, config);
    const RunConfig back = load_config(path);
    CHECK(config_to_json(back) == config_to_json(config));
}

TEST_CASE("labels csv round-trips including per-run columns") {
    LabelsArtifact labels;
    labels.vertex_ids = {"a", "b"};
    labels.hyperedge_ids = {"w1"};
    labels.vertex_labels = {0, 1};
    labels.hyperedge_labels = {1};
    labels.runs = {{{0, 1}, {0}}, {{1, 0}, {1}}};

    const TempDir tmp("hcc_test_labels");
    const std::string path = tmp.str() + "/labels.csv";
    write_labels_csv(path, labels);
    const LabelsArtifact back = read_labels_csv(path);
    CHECK(back.vertex_ids == labels.vertex_ids);
    CHECK(back.hyperedge_ids == labels.hyperedge_ids);
    CHECK(back.vertex_labels == labels.vertex_labels);
    CHECK(back.hyperedge_labels == labels.hyperedge_labels);
    CHECK(back.runs == labels.runs);
}

TEST_CASE("end-to-end fixture corpus run writes every artifact") {
    const TempDir corpus("hcc_test_fixture_corpus");
    write_fixture_corpus(corpus.str());
    const TempDir work("hcc_test_fixture_work");
    const RunConfig config = fixture_config(corpus.str(), work.str());

    const nlohmann::json metrics = run_pipeline(config);
    CHECK(metrics.at("method") == "s-spec-2");
    CHECK(metrics.contains("vertices"));
    CHECK(metrics.at("vertices").at("acc").get<double>() > 0.9);

    for (const char* artifact :
         {"hypergraph/R.mtx", "hypergraph/omega.csv", "pi.csv", "embedding.csv",
          "labels.csv", "truth.csv", "metrics.json", "manifest.json",
          "embedding_export.csv", "corpus/counts.mtx"}) {
        CAPTURE(artifact);
        CHECK(fs::exists(work.path / artifact));
    }

    std::ifstream in(work.path / "metrics.json");
    nlohmann::json parsed;
    in >> parsed;
    CHECK(parsed.at("method") == "s-spec-2");
}

TEST_CASE("same config twice produces identical manifest hashes") {
    const TempDir corpus("hcc_test_repeat_corpus");
    write_fixture_corpus(corpus.str());
    const TempDir work1("hcc_test_repeat_w1");
    const TempDir work2("hcc_test_repeat_w2");

    RunConfig c1 = fixture_config(corpus.str(), work1.str());
    RunConfig c2 = fixture_config(corpus.str(), work2.str());
    run_pipeline(c1);
    run_pipeline(c2);

    nlohmann::json m1, m2;
    std::ifstream(work1.path / "manifest.json") >> m1;
    std::ifstream(work2.path / "manifest.json") >> m2;
    CHECK(m1.at("artifacts") == m2.at("artifacts"));
}

TEST_CASE("method sweep on planted data yields comparable metric blocks") {
    const TempDir work("hcc_test_sweep");
    RunConfig config;
    config.seed = 3;
    config.input.kind = InputKind::synth;
    config.input.synth.n_vertices = 60;
    config.input.synth.n_hyperedges = 40;
    config.input.synth.n_blocks = 2;
    config.input.synth.p_in = 0.5;
    config.input.synth.p_out = 0.02;
    config.input.synth.seed = 5;
    config.embed.k = 2;
    config.cluster.k = 2;
    config.cluster.restarts = 4;

    for (Method method : {Method::s_spec_1, Method::s_spec_2, Method::naive,
                          Method::bi_spec}) {
        config.method = method;
        config.workdir = work.str() + "/" + to_string(method);
        const nlohmann::json metrics = run_pipeline(config);
        CAPTURE(to_string(method));
        CHECK(metrics.at("method") == to_string(method));
        CHECK(metrics.at("vertices").contains("acc"));
        CHECK(metrics.at("hyperedges").contains("ari"));
        // Planted structure at this contrast is easy for every method.
        CHECK(metrics.at("vertices").at("acc").get<double>() >= 0.9);
    }
}

TEST_CASE("report-all emits per-run metrics with mean and std") {
    const TempDir work("hcc_test_report_all");
    RunConfig config;
    config.seed = 4;
    config.input.kind = InputKind::synth;
    config.input.synth.n_vertices = 40;
    config.input.synth.n_hyperedges = 30;
    config.input.synth.n_blocks = 2;
    config.input.synth.p_in = 0.5;
    config.input.synth.p_out = 0.02;
    config.embed.k = 2;
    config.cluster.k = 2;
    config.cluster.restarts = 6;
    config.cluster.select = RunSelect::report_all;
    config.workdir = work.str();

    const nlohmann::json metrics = run_pipeline(config);
    CHECK(metrics.at("per_run").size() == 6);
    CHECK(metrics.at("mean").at("vertices").contains("acc"));
    CHECK(metrics.at("std").at("vertices").contains("acc"));
    const double mean_acc = metrics.at("mean").at("vertices").at("acc").get<double>();
    CHECK(mean_acc >= 0.0);
    CHECK(mean_acc <= 1.0);
}

TEST_CASE("disconnected inputs fail unless largest_component is requested") {
    const TempDir work("hcc_test_disconnected");
    // Two blocks with zero cross-probability gives two components.
    RunConfig config;
    config.input.kind = InputKind::synth;
    config.input.synth.n_vertices = 20;
    config.input.synth.n_hyperedges = 12;
    config.input.synth.n_blocks = 2;
    config.input.synth.p_in = 0.8;
    config.input.synth.p_out = 0.0;
    config.embed.k = 2;
    config.cluster.k = 2;
    config.workdir = work.str();

    // The synth generator repairs connectivity, so build the disconnected
    // hypergraph directly and load it through the hypergraph input kind.
    // Large component: 4 vertices x 3 hyperedges; small: 2 vertices x 1.
    const CsrMatrix r = CsrMatrix::from_triplets(
        4, 6, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.0}, {1, 2, 1.0},
               {2, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {3, 5, 1.0}});
    const EdvwHypergraph h = build_hypergraph(r, Eigen::VectorXd::Ones(4), true);
    save_hypergraph(work.str() + "/input_hg", h);
    config.input.kind = InputKind::hypergraph;
    config.input.path = work.str() + "/input_hg";
    config.cluster.restarts = 2;

    CHECK_THROWS_AS(run_pipeline(config), Disconnected);
    CHECK_FALSE(fs::exists(work.path / "manifest.json"));

    config.use_largest_component = true;
    const nlohmann::json metrics = run_pipeline(config);
    CHECK(fs::exists(work.path / "manifest.json"));
    CHECK(metrics.at("method") == "s-spec-2");
}

TEST_CASE("export round-trips the embedding and carries the exact header") {
    const TempDir work("hcc_test_export");
    RunConfig config;
    config.seed = 11;
    config.input.kind = InputKind::synth;
    config.input.synth.n_vertices = 3;
    config.input.synth.n_hyperedges = 2;
    config.input.synth.n_blocks = 1;
    config.input.synth.p_in = 1.0;
    config.embed.k = 2;
    config.cluster.k = 2;
    config.cluster.restarts = 2;
    config.workdir = work.str();
    run_pipeline(config);

    std::ifstream in(work.path / "embedding_export.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "id,kind,cluster,truth,x1,x2");
    int data_rows = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 5);

    const EmbeddingExport exported =
        read_embedding_export((work.path / "embedding_export.csv").string());
    const EmbeddingArtifact emb =
        read_embedding_csv((work.path / "embedding.csv").string());
    CHECK(exported.coords == emb.emb.u);
    CHECK(exported.kinds[0] == "vertex");
    CHECK(exported.kinds[4] == "hyperedge");
}

TEST_CASE("ncut evaluation lands in the metrics report") {
    const TempDir work("hcc_test_ncut_eval");
    RunConfig config;
    config.seed = 13;
    config.input.kind = InputKind::synth;
    config.input.synth.n_vertices = 30;
    config.input.synth.n_hyperedges = 20;
    config.input.synth.n_blocks = 2;
    config.input.synth.p_in = 0.6;
    config.input.synth.p_out = 0.05;
    config.embed.k = 2;
    config.cluster.k = 2;
    config.cluster.restarts = 3;
    config.evaluate_ncut = true;
    config.workdir = work.str();

    const nlohmann::json metrics = run_pipeline(config);
    CHECK(metrics.at("ncut").at("per_cluster").size() == 2);
    CHECK(metrics.at("ncut").at("total").get<double>() > 0.0);
}

TEST_CASE("embedding csv read-back is bit exact") {
    const TempDir work("hcc_test_embed_rt");
    RunConfig config;
    config.seed = 17;
    config.input.kind = InputKind::synth;
    config.input.synth.n_vertices = 25;
    config.input.synth.n_hyperedges = 15;
    config.input.synth.n_blocks = 2;
    config.input.synth.p_in = 0.5;
    config.input.synth.p_out = 0.05;
    config.embed.k = 3;
    config.cluster.k = 3;
    config.cluster.restarts = 2;
    config.workdir = work.str();
    run_pipeline(config);

    const EmbeddingArtifact art =
        read_embedding_csv((work.path / "embedding.csv").string());
    CHECK(art.emb.n_vertices == 25);
    CHECK(art.emb.n_hyperedges == 15);
    CHECK(art.emb.k == 3);

    // Re-clustering the reloaded embedding reproduces labels.csv.
    KmeansOptions kopts;
    kopts.seed = child_seed(config.seed, 20);
    kopts.n_restarts = config.cluster.restarts;
    const CoClustering cc = co_cluster(art.emb, 3, kopts);
    const LabelsArtifact labels =
        read_labels_csv((work.path / "labels.csv").string());
    CHECK(cc.vertex_labels == labels.vertex_labels);
    CHECK(cc.hyperedge_labels == labels.hyperedge_labels);
}

} // TEST_SUITE
