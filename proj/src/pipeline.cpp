#include "hcc/pipeline.hpp"

#include "hcc/errors.hpp"
#include "hcc/metrics.hpp"
#include "hcc/ncut.hpp"
#include "hcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hcc {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string svd_to_string(SvdBackend b) {
    switch (b) {
        case SvdBackend::randomized: return "randomized";
        case SvdBackend::lanczos: return "lanczos";
        case SvdBackend::dense: return "dense";
    }
    return "randomized";
}

SvdBackend svd_from_string(const std::string& s) {
    if (s == "randomized") return SvdBackend::randomized;
    if (s == "lanczos") return SvdBackend::lanczos;
    if (s == "dense") return SvdBackend::dense;
    throw InvalidArgument("unknown svd backend '" + s + "'");
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::s_spec_1: return "s-spec-1";
        case Method::s_spec_2: return "s-spec-2";
        case Method::naive: return "naive";
        case Method::bi_spec: return "bi-spec";
    }
    return "s-spec-2";
}

Method method_from_string(const std::string& s) {
    if (s == "s-spec-1") return Method::s_spec_1;
    if (s == "s-spec-2") return Method::s_spec_2;
    if (s == "naive") return Method::naive;
    if (s == "bi-spec") return Method::bi_spec;
    throw InvalidArgument("unknown method '" + s + "'");
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["seed"] = c.seed;
    j["workdir"] = c.workdir;
    j["method"] = to_string(c.method);
    j["input"]["kind"] = c.input.kind == InputKind::corpus_dir ? "corpus_dir"
                         : c.input.kind == InputKind::prebuilt ? "prebuilt"
                         : c.input.kind == InputKind::hypergraph ? "hypergraph"
                                                                 : "synth";
    j["input"]["path"] = c.input.path;
    j["input"]["synth"] = {
        {"n_vertices", c.input.synth.n_vertices},
        {"n_hyperedges", c.input.synth.n_hyperedges},
        {"n_blocks", c.input.synth.n_blocks},
        {"mode", c.input.synth.mode == SynthMode::membership ? "membership"
                                                             : "edvw-signal"},
        {"p_in", c.input.synth.p_in},
        {"p_out", c.input.synth.p_out},
        {"gamma_lo", c.input.synth.gamma_lo},
        {"gamma_hi", c.input.synth.gamma_hi},
        {"membership_p", c.input.synth.membership_p},
        {"edvw_contrast", c.input.synth.edvw_contrast},
        {"edge_scale_spread", c.input.synth.edge_scale_spread},
        {"seed", c.input.synth.seed},
    };
    j["ingest"] = {
        {"max_df", c.ingest.max_df},
        {"min_df", c.ingest.min_df},
        {"vocab_size", c.ingest.vocab_size},
        {"tfidf", c.ingest.tfidf_variant == TfidfVariant::smooth ? "smooth" : "plain"},
        {"weight_std", c.ingest.weight_std == WeightStd::all_entries ? "all" : "nonzero"},
        {"direction",
         c.ingest.direction == Direction::docs_as_vertices ? "docs" : "words"},
        {"stopwords", c.stopwords_path},
    };
    j["walk"] = {{"alpha", c.walk.alpha},
                 {"tol", c.walk.tol},
                 {"max_iter", c.walk.max_iter}};
    j["embed"] = {{"k", c.embed.k},
                  {"svd", svd_to_string(c.embed.svd)},
                  {"tol", c.embed.tol},
                  {"max_iter", c.embed.max_iter}};
    j["cluster"] = {{"k", c.cluster.k},
                    {"restarts", c.cluster.restarts},
                    {"max_iter", c.cluster.max_iter},
                    {"tol", c.cluster.tol},
                    {"select",
                     c.cluster.select == RunSelect::best ? "best" : "report-all"}};
    j["evaluate"] = {{"ncut", c.evaluate_ncut}};
    j["largest_component"] = c.use_largest_component;
    j["binary_edges"] = c.binary_edges;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.seed = j.value("seed", std::uint64_t{0});
    c.workdir = j.value("workdir", ".");
    c.method = method_from_string(j.value("method", "s-spec-2"));
    if (j.contains("input")) {
        const auto& ji = j.at("input");
        const std::string kind = ji.value("kind", "synth");
        if (kind == "corpus_dir") c.input.kind = InputKind::corpus_dir;
        else if (kind == "prebuilt") c.input.kind = InputKind::prebuilt;
        else if (kind == "hypergraph") c.input.kind = InputKind::hypergraph;
        else if (kind == "synth") c.input.kind = InputKind::synth;
        else throw InvalidArgument("unknown input kind '" + kind + "'");
        c.input.path = ji.value("path", "");
        if (ji.contains("synth")) {
            const auto& js = ji.at("synth");
            c.input.synth.n_vertices = js.value("n_vertices", index_t{400});
            c.input.synth.n_hyperedges = js.value("n_hyperedges", index_t{300});
            c.input.synth.n_blocks = js.value("n_blocks", 4);
            const std::string mode = js.value("mode", "membership");
            if (mode == "membership") c.input.synth.mode = SynthMode::membership;
            else if (mode == "edvw-signal") c.input.synth.mode = SynthMode::edvw_signal;
            else throw InvalidArgument("unknown synth mode '" + mode + "'");
            c.input.synth.p_in = js.value("p_in", 0.3);
            c.input.synth.p_out = js.value("p_out", 0.01);
            c.input.synth.gamma_lo = js.value("gamma_lo", 0.5);
            c.input.synth.gamma_hi = js.value("gamma_hi", 1.5);
            c.input.synth.membership_p = js.value("membership_p", 0.15);
            c.input.synth.edvw_contrast = js.value("edvw_contrast", 3.0);
            c.input.synth.edge_scale_spread = js.value("edge_scale_spread", 1.0);
            c.input.synth.seed = js.value("seed", std::uint64_t{0});
        }
    }
    if (j.contains("ingest")) {
        const auto& ji = j.at("ingest");
        c.ingest.max_df = ji.value("max_df", 0.20);
        c.ingest.min_df = ji.value("min_df", 0.002);
        c.ingest.vocab_size = ji.value("vocab_size", index_t{2000});
        c.ingest.tfidf_variant = ji.value("tfidf", "smooth") == std::string("plain")
                                     ? TfidfVariant::plain
                                     : TfidfVariant::smooth;
        c.ingest.weight_std = ji.value("weight_std", "all") == std::string("nonzero")
                                  ? WeightStd::nonzero
                                  : WeightStd::all_entries;
        c.ingest.direction = ji.value("direction", "docs") == std::string("words")
                                 ? Direction::words_as_vertices
                                 : Direction::docs_as_vertices;
        c.stopwords_path = ji.value("stopwords", "");
    }
    if (j.contains("walk")) {
        c.walk.alpha = j.at("walk").value("alpha", 0.5);
        c.walk.tol = j.at("walk").value("tol", 1e-12);
        c.walk.max_iter = j.at("walk").value("max_iter", 100000);
    }
    if (j.contains("embed")) {
        c.embed.k = j.at("embed").value("k", 4);
        c.embed.svd = svd_from_string(j.at("embed").value("svd", "randomized"));
        c.embed.tol = j.at("embed").value("tol", 1e-10);
        c.embed.max_iter = j.at("embed").value("max_iter", 300);
    }
    if (j.contains("cluster")) {
        c.cluster.k = j.at("cluster").value("k", 4);
        c.cluster.restarts = j.at("cluster").value("restarts", 10);
        c.cluster.max_iter = j.at("cluster").value("max_iter", 300);
        c.cluster.tol = j.at("cluster").value("tol", 1e-9);
        c.cluster.select =
            j.at("cluster").value("select", "best") == std::string("report-all")
                ? RunSelect::report_all
                : RunSelect::best;
    }
    if (j.contains("evaluate")) c.evaluate_ncut = j.at("evaluate").value("ncut", false);
    c.use_largest_component = j.value("largest_component", false);
    c.binary_edges = j.value("binary_edges", false);
    return c;
}

void save_config(const std::string& path, const RunConfig& config) {
    std::ofstream out(path);
    if (!out) throw IOFailure("cannot write " + path);
    out << config_to_json(config).dump(2) << "\n";
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

namespace {

std::vector<std::string> index_ids(index_t n, const std::vector<std::string>& names,
                                   const char* prefix) {
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i)
        ids.push_back(names.empty() ? prefix + std::to_string(i)
                                    : names[static_cast<std::size_t>(i)]);
    return ids;
}

template <typename T>
std::vector<T> gather(const std::vector<T>& source, const std::vector<index_t>& ids) {
    std::vector<T> out;
    out.reserve(ids.size());
    for (index_t i : ids) out.push_back(source[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace

PreparedInput prepare_input(const RunConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.workdir);
    PreparedInput out;

    if (config.input.kind == InputKind::synth) {
        PlantedHypergraph planted = planted_hypergraph(config.input.synth);
        out.h = std::move(planted.h);
        out.truth = TruthLabels{std::move(planted.vertex_blocks),
                                std::move(planted.hyperedge_blocks)};
    } else if (config.input.kind == InputKind::hypergraph) {
        out.h = load_hypergraph(config.input.path, /*allow_disconnected=*/true);
    } else {
        IngestConfig ingest = config.ingest;
        if (!config.stopwords_path.empty())
            ingest.stopwords = load_stopwords(config.stopwords_path);
        CorpusMatrix cm = config.input.kind == InputKind::corpus_dir
                              ? load_corpus_dir(config.input.path, ingest)
                              : load_prebuilt_corpus(config.input.path);
        cm = filter_vocabulary(cm, ingest);
        const CsrMatrix weights = tfidf(cm, ingest.tfidf_variant);
        TextHypergraphResult built =
            build_text_hypergraph(weights, ingest.direction, ingest.weight_std);

        if (!cm.doc_labels.empty()) {
            const int n_classes = static_cast<int>(
                cm.class_names.empty()
                    ? 1 + *std::max_element(cm.doc_labels.begin(), cm.doc_labels.end())
                    : cm.class_names.size());
            const std::vector<int> word_truth =
                word_ground_truth(cm.counts, cm.doc_labels, n_classes);
            TruthLabels truth;
            if (ingest.direction == Direction::docs_as_vertices) {
                truth.vertex_labels = gather(cm.doc_labels, built.vertex_ids);
                truth.hyperedge_labels = gather(word_truth, built.hyperedge_ids);
            } else {
                truth.vertex_labels = gather(word_truth, built.vertex_ids);
                truth.hyperedge_labels = gather(cm.doc_labels, built.hyperedge_ids);
            }
            out.truth = std::move(truth);
        }

        // Names follow the surviving rows/columns.
        const auto& doc_ids = cm.doc_ids;
        const auto& vocab = cm.vocab;
        if (ingest.direction == Direction::docs_as_vertices) {
            built.h.vertex_names = gather(doc_ids, built.vertex_ids);
            built.h.hyperedge_names = gather(vocab, built.hyperedge_ids);
        } else {
            built.h.vertex_names = gather(vocab, built.vertex_ids);
            built.h.hyperedge_names = gather(doc_ids, built.hyperedge_ids);
        }
        save_corpus(config.workdir + "/corpus", cm);
        out.corpus = std::move(cm);
        out.h = std::move(built.h);
    }

    if (!validate_connected(out.h)) {
        if (!config.use_largest_component)
            throw Disconnected(
                "input hypergraph is disconnected; rerun with the "
                "largest-component option to keep the biggest piece");
        ComponentExtraction extraction = largest_component(out.h);
        warn("keeping largest component: " +
             std::to_string(extraction.vertex_ids.size()) + " of " +
             std::to_string(out.h.n_vertices) + " vertices, " +
             std::to_string(extraction.hyperedge_ids.size()) + " of " +
             std::to_string(out.h.n_hyperedges) + " hyperedges");
        if (out.truth) {
            TruthLabels reduced;
            reduced.vertex_labels = gather(out.truth->vertex_labels, extraction.vertex_ids);
            reduced.hyperedge_labels =
                gather(out.truth->hyperedge_labels, extraction.hyperedge_ids);
            out.truth = std::move(reduced);
        }
        out.h = std::move(extraction.h);
    }

    save_hypergraph(config.workdir + "/hypergraph", out.h);
    if (out.truth) {
        LabelsArtifact truth;
        truth.vertex_ids = index_ids(out.h.n_vertices, out.h.vertex_names, "v");
        truth.hyperedge_ids = index_ids(out.h.n_hyperedges, out.h.hyperedge_names, "e");
        truth.vertex_labels = out.truth->vertex_labels;
        truth.hyperedge_labels = out.truth->hyperedge_labels;
        write_truth_csv(config.workdir + "/truth.csv", truth);
    }
    return out;
}

void write_labels_csv(const std::string& path, const LabelsArtifact& labels) {
    std::ofstream out(path);
    if (!out) throw IOFailure("cannot write " + path);
    out << "id,kind,label";
    for (std::size_t r = 0; r < labels.runs.size(); ++r) out << ",run_" << r;
    out << "\n";
    for (std::size_t v = 0; v < labels.vertex_ids.size(); ++v) {
        out << labels.vertex_ids[v] << ",vertex," << labels.vertex_labels[v];
        for (const auto& run : labels.runs) out << "," << run.first[v];
        out << "\n";
    }
    for (std::size_t e = 0; e < labels.hyperedge_ids.size(); ++e) {
        out << labels.hyperedge_ids[e] << ",hyperedge," << labels.hyperedge_labels[e];
        for (const auto& run : labels.runs) out << "," << run.second[e];
        out << "\n";
    }
}

LabelsArtifact read_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IOFailure("empty labels file " + path);
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "kind" ||
        header[2] != "label")
        throw IOFailure(path + " must start with id,kind,label");
    const std::size_t n_runs = header.size() - 3;

    LabelsArtifact out;
    out.runs.resize(n_runs);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw IOFailure("malformed row in " + path + ": " + line);
        const bool vertex = fields[1] == "vertex";
        if (!vertex && fields[1] != "hyperedge")
            throw IOFailure("unknown kind '" + fields[1] + "' in " + path);
        const int label = std::stoi(fields[2]);
        if (vertex) {
            out.vertex_ids.push_back(fields[0]);
            out.vertex_labels.push_back(label);
        } else {
            out.hyperedge_ids.push_back(fields[0]);
            out.hyperedge_labels.push_back(label);
        }
        for (std::size_t r = 0; r < n_runs; ++r) {
            const int run_label = std::stoi(fields[3 + r]);
            if (vertex) out.runs[r].first.push_back(run_label);
            else out.runs[r].second.push_back(run_label);
        }
    }
    return out;
}

void write_truth_csv(const std::string& path, const LabelsArtifact& truth) {
    LabelsArtifact plain = truth;
    plain.runs.clear();
    write_labels_csv(path, plain);
}

void write_pi_csv(const std::string& path, const Eigen::VectorXd& pi) {
    std::ofstream out(path);
    if (!out) throw IOFailure("cannot write " + path);
    out << "pi\n";
    for (index_t i = 0; i < pi.size(); ++i) out << format_double(pi[i]) << "\n";
}

void write_embedding_csv(const std::string& path, const SpectralEmbedding& emb,
                         const std::vector<std::string>& vertex_ids,
                         const std::vector<std::string>& hyperedge_ids) {
    std::ofstream out(path);
    if (!out) throw IOFailure("cannot write " + path);
    out << "id,kind";
    for (int c = 0; c < emb.k; ++c) out << ",x" << (c + 1);
    out << "\n";
    for (index_t i = 0; i < emb.u.rows(); ++i) {
        const bool vertex = i < emb.n_vertices;
        out << (vertex ? vertex_ids[static_cast<std::size_t>(i)]
                       : hyperedge_ids[static_cast<std::size_t>(i - emb.n_vertices)])
            << "," << (vertex ? "vertex" : "hyperedge");
        for (int c = 0; c < emb.k; ++c) out << "," << format_double(emb.u(i, c));
        out << "\n";
    }
}

EmbeddingArtifact read_embedding_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IOFailure("empty embedding file " + path);
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "kind" ||
        header[2] != "x1")
        throw IOFailure(path + " must start with id,kind,x1");
    const auto k = header.size() - 2;

    EmbeddingArtifact out;
    std::vector<std::vector<double>> vertex_rows, edge_rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw IOFailure("malformed row in " + path + ": " + line);
        std::vector<double> coords;
        for (std::size_t c = 0; c < k; ++c) coords.push_back(std::stod(fields[2 + c]));
        if (fields[1] == "vertex") {
            out.vertex_ids.push_back(fields[0]);
            vertex_rows.push_back(std::move(coords));
        } else if (fields[1] == "hyperedge") {
            out.hyperedge_ids.push_back(fields[0]);
            edge_rows.push_back(std::move(coords));
        } else {
            throw IOFailure("unknown kind '" + fields[1] + "' in " + path);
        }
    }
    out.emb.k = static_cast<int>(k);
    out.emb.n_vertices = static_cast<index_t>(vertex_rows.size());
    out.emb.n_hyperedges = static_cast<index_t>(edge_rows.size());
    out.emb.u.resize(out.emb.n_vertices + out.emb.n_hyperedges,
                     static_cast<index_t>(k));
    for (std::size_t i = 0; i < vertex_rows.size(); ++i)
        for (std::size_t c = 0; c < k; ++c)
            out.emb.u(static_cast<index_t>(i), static_cast<index_t>(c)) =
                vertex_rows[i][c];
    for (std::size_t i = 0; i < edge_rows.size(); ++i)
        for (std::size_t c = 0; c < k; ++c)
            out.emb.u(out.emb.n_vertices + static_cast<index_t>(i),
                      static_cast<index_t>(c)) = edge_rows[i][c];
    return out;
}

void export_embeddings(const SpectralEmbedding& emb, const LabelsArtifact& labels,
                       const std::optional<TruthLabels>& truth,
                       const std::string& path) {
    if (static_cast<index_t>(labels.vertex_labels.size()) != emb.n_vertices ||
        static_cast<index_t>(labels.hyperedge_labels.size()) != emb.n_hyperedges)
        throw LengthMismatch("export_embeddings: labels do not match embedding");

    std::ofstream out(path);
    if (!out) throw IOFailure("cannot write " + path);
    out << "id,kind,cluster,truth";
    for (int c = 0; c < emb.k; ++c) out << ",x" << (c + 1);
    out << "\n";
    for (index_t i = 0; i < emb.u.rows(); ++i) {
        const bool vertex = i < emb.n_vertices;
        const auto local = static_cast<std::size_t>(vertex ? i : i - emb.n_vertices);
        out << (vertex ? labels.vertex_ids[local] : labels.hyperedge_ids[local]) << ","
            << (vertex ? "vertex" : "hyperedge") << ","
            << (vertex ? labels.vertex_labels[local] : labels.hyperedge_labels[local])
            << ",";
        if (truth) {
            const int t = vertex ? truth->vertex_labels[local]
                                 : truth->hyperedge_labels[local];
            if (t >= 0) out << t;
        }
        for (int c = 0; c < emb.k; ++c) out << "," << format_double(emb.u(i, c));
        out << "\n";
    }
}

EmbeddingExport read_embedding_export(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IOFailure("empty export " + path);
    const auto header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "id" || header[1] != "kind" ||
        header[2] != "cluster" || header[3] != "truth" || header[4] != "x1")
        throw IOFailure(path + " must start with id,kind,cluster,truth,x1");
    const std::size_t k = header.size() - 4;

    EmbeddingExport out;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw IOFailure("malformed row in " + path + ": " + line);
        out.ids.push_back(fields[0]);
        out.kinds.push_back(fields[1]);
        out.clusters.push_back(std::stoi(fields[2]));
        out.truths.push_back(fields[3].empty() ? -1 : std::stoi(fields[3]));
        std::vector<double> coords;
        for (std::size_t c = 0; c < k; ++c) coords.push_back(std::stod(fields[4 + c]));
        rows.push_back(std::move(coords));
    }
    out.coords.resize(static_cast<index_t>(rows.size()), static_cast<index_t>(k));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < k; ++c)
            out.coords(static_cast<index_t>(i), static_cast<index_t>(c)) = rows[i][c];
    return out;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOFailure("cannot hash " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[4096];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
        if (in.eof()) break;
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv1a:%016llx",
                  static_cast<unsigned long long>(hash));
    return hex;
}

namespace {

nlohmann::json metrics_block(const std::vector<int>& pred,
                             const std::vector<int>& truth) {
    // Drop pairs without truth (-1).
    std::vector<int> p, t;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] < 0) continue;
        p.push_back(pred[i]);
        t.push_back(truth[i]);
    }
    if (p.empty()) return nullptr;
    const LabeledEvaluation ev = evaluate_labels(p, t);
    return {{"acc", ev.acc}, {"nmi", ev.nmi}, {"f1", ev.f1}, {"ari", ev.ari}};
}

nlohmann::json mean_std(const std::vector<nlohmann::json>& blocks) {
    nlohmann::json mean, sd;
    if (blocks.empty() || blocks.front().is_null()) return {{"mean", nullptr}, {"std", nullptr}};
    for (const auto& key : {"acc", "nmi", "f1", "ari"}) {
        double m = 0.0;
        for (const auto& b : blocks) m += b.at(key).get<double>();
        m /= static_cast<double>(blocks.size());
        double var = 0.0;
        for (const auto& b : blocks) {
            const double d = b.at(key).get<double>() - m;
            var += d * d;
        }
        var /= static_cast<double>(blocks.size());
        mean[key] = m;
        sd[key] = std::sqrt(var);
    }
    return {{"mean", mean}, {"std", sd}};
}

} // namespace

nlohmann::json run_pipeline(const RunConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.workdir);

    PreparedInput input = prepare_input(config);
    const EdvwHypergraph& h = input.h;

    LabelsArtifact labels;
    labels.vertex_ids = [&] {
        std::vector<std::string> ids;
        for (index_t v = 0; v < h.n_vertices; ++v)
            ids.push_back(h.vertex_names.empty() ? "v" + std::to_string(v)
                                                 : h.vertex_names[static_cast<std::size_t>(v)]);
        return ids;
    }();
    labels.hyperedge_ids = [&] {
        std::vector<std::string> ids;
        for (index_t e = 0; e < h.n_hyperedges; ++e)
            ids.push_back(h.hyperedge_names.empty()
                              ? "e" + std::to_string(e)
                              : h.hyperedge_names[static_cast<std::size_t>(e)]);
        return ids;
    }();

    const bool keep_runs = config.cluster.select == RunSelect::report_all;
    KmeansOptions kopts;
    kopts.n_restarts = config.cluster.restarts;
    kopts.max_iter = config.cluster.max_iter;
    kopts.tol = config.cluster.tol;
    kopts.seed = child_seed(config.seed, 20);
    kopts.keep_runs = keep_runs;

    SvdOptions svd_opts;
    svd_opts.backend = config.embed.svd;
    svd_opts.tol = config.embed.tol;
    svd_opts.max_iter = config.embed.max_iter;
    svd_opts.seed = child_seed(config.seed, 10);

    std::optional<SpectralEmbedding> embedding;
    std::optional<WalkOperators> walk_ops;
    const auto ensure_walk = [&]() -> const WalkOperators& {
        if (!walk_ops) {
            StationaryOptions sopts;
            sopts.tol = config.walk.tol;
            sopts.max_iter = config.walk.max_iter;
            walk_ops = build_walk(h, config.walk.alpha, sopts);
        }
        return *walk_ops;
    };

    if (config.method == Method::s_spec_1 || config.method == Method::s_spec_2) {
        const WalkOperators& walk = ensure_walk();
        write_pi_csv(config.workdir + "/pi.csv", walk.pi);

        const bool normalize = config.method == Method::s_spec_2;
        embedding = spectral_embedding(walk, config.embed.k, normalize, svd_opts);
        write_embedding_csv(config.workdir + "/embedding.csv", *embedding,
                            labels.vertex_ids, labels.hyperedge_ids);

        CoClustering cc = co_cluster(*embedding, config.cluster.k, kopts);
        labels.vertex_labels = std::move(cc.vertex_labels);
        labels.hyperedge_labels = std::move(cc.hyperedge_labels);
        for (auto& run : cc.runs) {
            const auto nv = static_cast<std::size_t>(h.n_vertices);
            labels.runs.emplace_back(
                std::vector<int>(run.labels.begin(), run.labels.begin() + nv),
                std::vector<int>(run.labels.begin() + nv, run.labels.end()));
        }
    } else {
        const CsrMatrix features = h.r.transposed(); // |V| x |E|
        BaselineResult result =
            config.method == Method::naive
                ? naive_baseline(features, config.cluster.k, kopts)
                : bipartite_spectral(features, config.cluster.k, kopts, svd_opts,
                                     config.binary_edges);
        labels.vertex_labels = std::move(result.vertex_labels);
        labels.hyperedge_labels = std::move(result.hyperedge_labels);
        for (auto& run : result.runs)
            labels.runs.emplace_back(std::move(run.vertex_labels),
                                     std::move(run.hyperedge_labels));
    }
    write_labels_csv(config.workdir + "/labels.csv", labels);

    nlohmann::json metrics;
    metrics["method"] = to_string(config.method);
    metrics["k"] = config.cluster.k;
    metrics["seed"] = config.seed;
    if (input.truth) {
        metrics["vertices"] = metrics_block(labels.vertex_labels,
                                            input.truth->vertex_labels);
        metrics["hyperedges"] = metrics_block(labels.hyperedge_labels,
                                              input.truth->hyperedge_labels);
        if (!labels.runs.empty()) {
            std::vector<nlohmann::json> vblocks, eblocks;
            nlohmann::json per_run = nlohmann::json::array();
            for (const auto& run : labels.runs) {
                nlohmann::json jr;
                jr["vertices"] = metrics_block(run.first, input.truth->vertex_labels);
                jr["hyperedges"] =
                    metrics_block(run.second, input.truth->hyperedge_labels);
                vblocks.push_back(jr["vertices"]);
                eblocks.push_back(jr["hyperedges"]);
                per_run.push_back(std::move(jr));
            }
            metrics["per_run"] = std::move(per_run);
            const auto vstats = mean_std(vblocks);
            const auto estats = mean_std(eblocks);
            metrics["mean"] = {{"vertices", vstats.at("mean")},
                               {"hyperedges", estats.at("mean")}};
            metrics["std"] = {{"vertices", vstats.at("std")},
                              {"hyperedges", estats.at("std")}};
        }
    }
    if (config.evaluate_ncut) {
        const HypergraphLaplacians lap = laplacians(ensure_walk());
        std::vector<int> joint = labels.vertex_labels;
        joint.insert(joint.end(), labels.hyperedge_labels.begin(),
                     labels.hyperedge_labels.end());
        const CutVolume cv = cut_and_vol(lap.a, joint, config.cluster.k);
        nlohmann::json jn;
        jn["per_cluster"] = nlohmann::json::array();
        for (int c = 0; c < config.cluster.k; ++c)
            jn["per_cluster"].push_back({{"cut", cv.cut[c]}, {"vol", cv.vol[c]}});
        jn["total"] = ncut(lap.a, joint, config.cluster.k);
        metrics["ncut"] = std::move(jn);
    }
    {
        std::ofstream out(config.workdir + "/metrics.json");
        if (!out) throw IOFailure("cannot write metrics.json");
        out << metrics.dump(2) << "\n";
    }

    if (embedding) {
        export_embeddings(*embedding, labels, input.truth,
                          config.workdir + "/embedding_export.csv");
    }

    // Manifest last: its presence marks a complete, valid run.
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = config.seed;
    manifest["config"] = config_to_json(config);
    nlohmann::json artifacts;
    for (const char* name : {"labels.csv", "metrics.json", "pi.csv",
                             "embedding.csv", "embedding_export.csv", "truth.csv"}) {
        const std::string path = config.workdir + "/" + name;
        if (fs::exists(path)) artifacts[name] = file_hash(path);
    }
    artifacts["hypergraph/R.mtx"] = file_hash(config.workdir + "/hypergraph/R.mtx");
    artifacts["hypergraph/omega.csv"] =
        file_hash(config.workdir + "/hypergraph/omega.csv");
    manifest["artifacts"] = std::move(artifacts);
    {
        std::ofstream out(config.workdir + "/manifest.json");
        if (!out) throw IOFailure("cannot write manifest.json");
        out << manifest.dump(2) << "\n";
    }
    return metrics;
}

} // namespace hcc
