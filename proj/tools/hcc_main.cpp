#include "hcc/errors.hpp"
#include "hcc/kernels.hpp"
#include "hcc/metrics.hpp"
#include "hcc/ncut.hpp"
#include "hcc/pipeline.hpp"
#include "hcc/rng.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace hcc;

struct CommonFlags {
    std::string workdir = ".";
};

void add_ingest_flags(CLI::App* cmd, RunConfig& config, std::string& direction,
                      std::string& tfidf, std::string& weight_std) {
    cmd->add_option("--max-df", config.ingest.max_df,
                    "drop words in more than this fraction of documents")
        ->capture_default_str();
    cmd->add_option("--min-df", config.ingest.min_df,
                    "drop words in fewer than this fraction of documents")
        ->capture_default_str();
    cmd->add_option("--vocab-size", config.ingest.vocab_size,
                    "keep at most this many words (by total frequency)")
        ->capture_default_str();
    cmd->add_option("--stopwords", config.stopwords_path,
                    "stopword list file (default: bundled English list)");
    cmd->add_option("--tfidf", tfidf, "tf-idf variant: smooth|plain")
        ->capture_default_str();
    cmd->add_option("--weight-std", weight_std,
                    "hyperedge std over: all|nonzero entries")
        ->capture_default_str();
    cmd->add_option("--direction", direction,
                    "hypergraph orientation: docs|words as vertices")
        ->capture_default_str();
    cmd->add_flag("--largest-component", config.use_largest_component,
                  "keep the largest component instead of rejecting "
                  "disconnected inputs");
}

void apply_ingest_strings(RunConfig& config, const std::string& direction,
                          const std::string& tfidf, const std::string& weight_std) {
    if (direction == "docs") config.ingest.direction = Direction::docs_as_vertices;
    else if (direction == "words") config.ingest.direction = Direction::words_as_vertices;
    else throw InvalidArgument("--direction must be docs or words");
    if (tfidf == "smooth") config.ingest.tfidf_variant = TfidfVariant::smooth;
    else if (tfidf == "plain") config.ingest.tfidf_variant = TfidfVariant::plain;
    else throw InvalidArgument("--tfidf must be smooth or plain");
    if (weight_std == "all") config.ingest.weight_std = WeightStd::all_entries;
    else if (weight_std == "nonzero") config.ingest.weight_std = WeightStd::nonzero;
    else throw InvalidArgument("--weight-std must be all or nonzero");
}

SvdBackend parse_svd(const std::string& s) {
    if (s == "randomized") return SvdBackend::randomized;
    if (s == "lanczos") return SvdBackend::lanczos;
    if (s == "dense") return SvdBackend::dense;
    throw InvalidArgument("--svd must be randomized, lanczos, or dense");
}

nlohmann::json evaluate_files(const std::string& workdir, const std::string& method,
                              bool with_ncut, double alpha) {
    const LabelsArtifact pred = read_labels_csv(workdir + "/labels.csv");

    nlohmann::json metrics;
    metrics["method"] = method;

    const std::string truth_path = workdir + "/truth.csv";
    if (std::filesystem::exists(truth_path)) {
        const LabelsArtifact truth = read_labels_csv(truth_path);
        const auto block = [](const std::vector<int>& p, const std::vector<int>& t) {
            std::vector<int> pk, tk;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (t[i] < 0) continue;
                pk.push_back(p[i]);
                tk.push_back(t[i]);
            }
            nlohmann::json j;
            if (pk.empty()) return j = nullptr, j;
            const LabeledEvaluation ev = evaluate_labels(pk, tk);
            j = {{"acc", ev.acc}, {"nmi", ev.nmi}, {"f1", ev.f1}, {"ari", ev.ari}};
            return j;
        };
        if (pred.vertex_labels.size() != truth.vertex_labels.size() ||
            pred.hyperedge_labels.size() != truth.hyperedge_labels.size())
            throw LengthMismatch("labels.csv and truth.csv cover different elements");
        metrics["vertices"] = block(pred.vertex_labels, truth.vertex_labels);
        metrics["hyperedges"] = block(pred.hyperedge_labels, truth.hyperedge_labels);
        if (!pred.runs.empty()) {
            nlohmann::json per_run = nlohmann::json::array();
            std::vector<nlohmann::json> vb, eb;
            for (const auto& run : pred.runs) {
                nlohmann::json jr;
                jr["vertices"] = block(run.first, truth.vertex_labels);
                jr["hyperedges"] = block(run.second, truth.hyperedge_labels);
                vb.push_back(jr["vertices"]);
                eb.push_back(jr["hyperedges"]);
                per_run.push_back(std::move(jr));
            }
            metrics["per_run"] = std::move(per_run);
            const auto stats = [](const std::vector<nlohmann::json>& blocks) {
                nlohmann::json mean, sd;
                if (blocks.empty() || blocks.front().is_null())
                    return nlohmann::json{{"mean", nullptr}, {"std", nullptr}};
                for (const char* key : {"acc", "nmi", "f1", "ari"}) {
                    double m = 0.0;
                    for (const auto& b : blocks) m += b.at(key).get<double>();
                    m /= static_cast<double>(blocks.size());
                    double var = 0.0;
                    for (const auto& b : blocks) {
                        const double d = b.at(key).get<double>() - m;
                        var += d * d;
                    }
                    mean[key] = m;
                    sd[key] = std::sqrt(var / static_cast<double>(blocks.size()));
                }
                return nlohmann::json{{"mean", mean}, {"std", sd}};
            };
            const auto vs = stats(vb);
            const auto es = stats(eb);
            metrics["mean"] = {{"vertices", vs.at("mean")}, {"hyperedges", es.at("mean")}};
            metrics["std"] = {{"vertices", vs.at("std")}, {"hyperedges", es.at("std")}};
        }
    }

    if (with_ncut) {
        const EdvwHypergraph h = load_hypergraph(workdir + "/hypergraph");
        const WalkOperators walk = build_walk(h, alpha);
        const HypergraphLaplacians lap = laplacians(walk);
        std::vector<int> joint = pred.vertex_labels;
        joint.insert(joint.end(), pred.hyperedge_labels.begin(),
                     pred.hyperedge_labels.end());
        int k = 0;
        for (int l : joint) k = std::max(k, l + 1);
        const CutVolume cv = cut_and_vol(lap.a, joint, k);
        nlohmann::json jn;
        jn["per_cluster"] = nlohmann::json::array();
        for (int c = 0; c < k; ++c)
            jn["per_cluster"].push_back({{"cut", cv.cut[c]}, {"vol", cv.vol[c]}});
        jn["total"] = ncut(lap.a, joint, k);
        metrics["ncut"] = std::move(jn);
    }

    std::ofstream out(workdir + "/metrics.json");
    if (!out) throw IOFailure("cannot write metrics.json");
    out << metrics.dump(2) << "\n";
    return metrics;
}

} // namespace

int main(int argc, char** argv) {
    hcc::kernels::apply_thread_cap_from_env();

    CLI::App app{"hcc: spectral co-clustering of vertices and hyperedges of "
                 "hypergraphs with edge-dependent vertex weights"};
    app.require_subcommand(1);

    RunConfig config;
    std::string direction = "docs", tfidf_s = "smooth", weight_std_s = "all";
    std::string svd_s = "randomized", normalize_s = "rows", select_s = "best";
    std::string method_s = "s-spec-2", mode_s = "membership";
    std::string input_path, config_path, output_path = "embedding_export.csv";
    std::string emit = "pi";
    bool prebuilt = false;

    // ingest
    auto* ingest_cmd = app.add_subcommand(
        "ingest", "build an EDVW hypergraph from a text corpus");
    ingest_cmd->add_option("--input", input_path, "corpus directory")->required();
    ingest_cmd->add_flag("--prebuilt", prebuilt,
                         "input holds counts.mtx + vocab.txt (+ labels.csv) "
                         "instead of .txt files");
    ingest_cmd->add_option("--workdir", config.workdir, "artifact directory")
        ->capture_default_str();
    add_ingest_flags(ingest_cmd, config, direction, tfidf_s, weight_std_s);

    // synth
    auto* synth_cmd = app.add_subcommand(
        "synth", "generate a planted co-cluster EDVW hypergraph");
    synth_cmd->add_option("--workdir", config.workdir, "artifact directory")
        ->capture_default_str();
    synth_cmd->add_option("--vertices", config.input.synth.n_vertices, "")
        ->capture_default_str();
    synth_cmd->add_option("--hyperedges", config.input.synth.n_hyperedges, "")
        ->capture_default_str();
    synth_cmd->add_option("--blocks", config.input.synth.n_blocks, "")
        ->capture_default_str();
    synth_cmd->add_option("--mode", mode_s, "membership|edvw-signal")
        ->capture_default_str();
    synth_cmd->add_option("--p-in", config.input.synth.p_in, "")->capture_default_str();
    synth_cmd->add_option("--p-out", config.input.synth.p_out, "")->capture_default_str();
    synth_cmd->add_option("--membership-p", config.input.synth.membership_p, "")
        ->capture_default_str();
    synth_cmd->add_option("--edvw-contrast", config.input.synth.edvw_contrast, "")
        ->capture_default_str();
    synth_cmd
        ->add_option("--edge-scale-spread", config.input.synth.edge_scale_spread,
                     "per-hyperedge nuisance scale range (edvw-signal mode)")
        ->capture_default_str();
    synth_cmd->add_option("--seed", config.input.synth.seed, "")->capture_default_str();

    // walk
    auto* walk_cmd = app.add_subcommand(
        "walk", "random-walk operators and stationary distribution");
    walk_cmd->add_option("--workdir", config.workdir, "")->capture_default_str();
    walk_cmd->add_option("--alpha", config.walk.alpha, "laziness in (0,1)")
        ->capture_default_str();
    walk_cmd->add_option("--tol", config.walk.tol, "stationarity residual bound")
        ->capture_default_str();
    walk_cmd->add_option("--max-iter", config.walk.max_iter, "")->capture_default_str();
    walk_cmd->add_option("--emit", emit,
                         "comma list of pi,L,Lnorm,A to write")
        ->capture_default_str();

    // embed
    auto* embed_cmd = app.add_subcommand(
        "embed", "joint spectral embedding from the half-size SVD");
    embed_cmd->add_option("--workdir", config.workdir, "")->capture_default_str();
    embed_cmd->add_option("--k", config.embed.k, "embedding dimension")
        ->capture_default_str();
    embed_cmd->add_option("--normalize", normalize_s, "none|rows")
        ->capture_default_str();
    embed_cmd->add_option("--svd", svd_s, "randomized|lanczos|dense")
        ->capture_default_str();
    embed_cmd->add_option("--seed", config.seed, "")->capture_default_str();
    embed_cmd->add_option("--tol", config.embed.tol, "SVD residual bound")
        ->capture_default_str();
    embed_cmd->add_option("--alpha", config.walk.alpha, "walk laziness")
        ->capture_default_str();

    // cluster
    auto* cluster_cmd = app.add_subcommand("cluster", "co-cluster the embedding");
    cluster_cmd->add_option("--workdir", config.workdir, "")->capture_default_str();
    cluster_cmd->add_option("--method", method_s,
                            "s-spec-1|s-spec-2|naive|bi-spec")
        ->capture_default_str();
    cluster_cmd->add_option("--k", config.cluster.k, "")->capture_default_str();
    cluster_cmd->add_option("--restarts", config.cluster.restarts, "")
        ->capture_default_str();
    cluster_cmd->add_option("--seed", config.seed, "")->capture_default_str();
    cluster_cmd->add_option("--max-iter", config.cluster.max_iter, "")
        ->capture_default_str();
    cluster_cmd->add_option("--tol", config.cluster.tol, "")->capture_default_str();
    cluster_cmd->add_option("--select", select_s, "best|report-all")
        ->capture_default_str();
    cluster_cmd->add_flag("--binary-edges", config.binary_edges,
                          "bi-spec: use unweighted bipartite edges");

    // evaluate
    auto* eval_cmd = app.add_subcommand(
        "evaluate", "clustering metrics against truth.csv");
    eval_cmd->add_option("--workdir", config.workdir, "")->capture_default_str();
    eval_cmd->add_option("--method", method_s, "method name for the report")
        ->capture_default_str();
    eval_cmd->add_flag("--ncut", config.evaluate_ncut,
                       "also report per-cluster cut/vol on the induced graph");
    eval_cmd->add_option("--alpha", config.walk.alpha, "walk laziness for --ncut")
        ->capture_default_str();

    // export
    auto* export_cmd = app.add_subcommand(
        "export", "merge embedding + labels (+ truth) into one CSV");
    export_cmd->add_option("--workdir", config.workdir, "")->capture_default_str();
    export_cmd->add_option("--output", output_path, "")->capture_default_str();

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
    run_cmd->add_option("--config", config_path, "run configuration (JSON)")
        ->required();
    auto* run_workdir =
        run_cmd->add_option("--workdir", config.workdir, "override workdir");
    auto* run_seed = run_cmd->add_option("--seed", config.seed, "override seed");
    auto* run_method = run_cmd->add_option("--method", method_s, "override method");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest_cmd) {
            apply_ingest_strings(config, direction, tfidf_s, weight_std_s);
            config.input.kind = prebuilt ? InputKind::prebuilt : InputKind::corpus_dir;
            config.input.path = input_path;
            prepare_input(config);
            std::cout << "hypergraph written to " << config.workdir
                      << "/hypergraph\n";
        } else if (*synth_cmd) {
            if (mode_s == "membership") config.input.synth.mode = SynthMode::membership;
            else if (mode_s == "edvw-signal")
                config.input.synth.mode = SynthMode::edvw_signal;
            else throw InvalidArgument("--mode must be membership or edvw-signal");
            config.input.kind = InputKind::synth;
            prepare_input(config);
            std::cout << "hypergraph written to " << config.workdir
                      << "/hypergraph\n";
        } else if (*walk_cmd) {
            const EdvwHypergraph h = load_hypergraph(config.workdir + "/hypergraph");
            StationaryOptions sopts;
            sopts.tol = config.walk.tol;
            sopts.max_iter = config.walk.max_iter;
            const WalkOperators walk = build_walk(h, config.walk.alpha, sopts);
            std::optional<HypergraphLaplacians> lap;
            std::stringstream items(emit);
            std::string item;
            while (std::getline(items, item, ',')) {
                if (item == "pi") {
                    write_pi_csv(config.workdir + "/pi.csv", walk.pi);
                } else if (item == "L" || item == "Lnorm" || item == "A") {
                    if (!lap) lap = laplacians(walk);
                    const CsrMatrix& m = item == "L" ? lap->l
                                         : item == "Lnorm" ? lap->l_norm
                                                           : lap->a;
                    write_matrix_market(config.workdir + "/" + item + ".mtx", m);
                } else {
                    throw InvalidArgument("--emit item must be pi, L, Lnorm, or A");
                }
                std::cout << "wrote " << item << "\n";
            }
        } else if (*embed_cmd) {
            const EdvwHypergraph h = load_hypergraph(config.workdir + "/hypergraph");
            const WalkOperators walk = build_walk(h, config.walk.alpha);
            SvdOptions opts;
            opts.backend = parse_svd(svd_s);
            opts.tol = config.embed.tol;
            opts.seed = child_seed(config.seed, 10);
            const bool normalize = normalize_s == "rows";
            if (!normalize && normalize_s != "none")
                throw InvalidArgument("--normalize must be none or rows");
            const SpectralEmbedding emb =
                spectral_embedding(walk, config.embed.k, normalize, opts);
            std::vector<std::string> vids, eids;
            for (index_t v = 0; v < h.n_vertices; ++v)
                vids.push_back(h.vertex_names.empty()
                                   ? "v" + std::to_string(v)
                                   : h.vertex_names[static_cast<std::size_t>(v)]);
            for (index_t e = 0; e < h.n_hyperedges; ++e)
                eids.push_back(h.hyperedge_names.empty()
                                   ? "e" + std::to_string(e)
                                   : h.hyperedge_names[static_cast<std::size_t>(e)]);
            write_embedding_csv(config.workdir + "/embedding.csv", emb, vids, eids);
            std::cout << "embedding written to " << config.workdir
                      << "/embedding.csv\n";
        } else if (*cluster_cmd) {
            config.method = method_from_string(method_s);
            config.cluster.select = select_s == "report-all" ? RunSelect::report_all
                                                             : RunSelect::best;
            KmeansOptions kopts;
            kopts.n_restarts = config.cluster.restarts;
            kopts.max_iter = config.cluster.max_iter;
            kopts.tol = config.cluster.tol;
            kopts.seed = child_seed(config.seed, 20);
            kopts.keep_runs = config.cluster.select == RunSelect::report_all;

            LabelsArtifact labels;
            if (config.method == Method::s_spec_1 || config.method == Method::s_spec_2) {
                EmbeddingArtifact art =
                    read_embedding_csv(config.workdir + "/embedding.csv");
                CoClustering cc = co_cluster(art.emb, config.cluster.k, kopts);
                labels.vertex_ids = std::move(art.vertex_ids);
                labels.hyperedge_ids = std::move(art.hyperedge_ids);
                labels.vertex_labels = std::move(cc.vertex_labels);
                labels.hyperedge_labels = std::move(cc.hyperedge_labels);
                for (auto& run : cc.runs) {
                    const auto nv = static_cast<std::size_t>(art.emb.n_vertices);
                    labels.runs.emplace_back(
                        std::vector<int>(run.labels.begin(), run.labels.begin() + nv),
                        std::vector<int>(run.labels.begin() + nv, run.labels.end()));
                }
            } else {
                const EdvwHypergraph h =
                    load_hypergraph(config.workdir + "/hypergraph");
                SvdOptions svd_opts;
                svd_opts.seed = child_seed(config.seed, 10);
                BaselineResult result =
                    config.method == Method::naive
                        ? naive_baseline(h.r.transposed(), config.cluster.k, kopts)
                        : bipartite_spectral(h.r.transposed(), config.cluster.k,
                                             kopts, svd_opts, config.binary_edges);
                for (index_t v = 0; v < h.n_vertices; ++v)
                    labels.vertex_ids.push_back(
                        h.vertex_names.empty()
                            ? "v" + std::to_string(v)
                            : h.vertex_names[static_cast<std::size_t>(v)]);
                for (index_t e = 0; e < h.n_hyperedges; ++e)
                    labels.hyperedge_ids.push_back(
                        h.hyperedge_names.empty()
                            ? "e" + std::to_string(e)
                            : h.hyperedge_names[static_cast<std::size_t>(e)]);
                labels.vertex_labels = std::move(result.vertex_labels);
                labels.hyperedge_labels = std::move(result.hyperedge_labels);
                for (auto& run : result.runs)
                    labels.runs.emplace_back(std::move(run.vertex_labels),
                                             std::move(run.hyperedge_labels));
            }
            write_labels_csv(config.workdir + "/labels.csv", labels);
            std::cout << "labels written to " << config.workdir << "/labels.csv\n";
        } else if (*eval_cmd) {
            const nlohmann::json metrics = evaluate_files(
                config.workdir, method_s, config.evaluate_ncut, config.walk.alpha);
            std::cout << metrics.dump(2) << "\n";
        } else if (*export_cmd) {
            EmbeddingArtifact art = read_embedding_csv(config.workdir + "/embedding.csv");
            LabelsArtifact labels = read_labels_csv(config.workdir + "/labels.csv");
            std::optional<TruthLabels> truth;
            if (std::filesystem::exists(config.workdir + "/truth.csv")) {
                const LabelsArtifact t = read_labels_csv(config.workdir + "/truth.csv");
                truth = TruthLabels{t.vertex_labels, t.hyperedge_labels};
            }
            export_embeddings(art.emb, labels, truth, output_path);
            std::cout << "export written to " << output_path << "\n";
        } else if (*run_cmd) {
            RunConfig run_config = load_config(config_path);
            if (run_workdir->count() > 0) run_config.workdir = config.workdir;
            if (run_seed->count() > 0) run_config.seed = config.seed;
            if (run_method->count() > 0)
                run_config.method = method_from_string(method_s);
            const nlohmann::json metrics = run_pipeline(run_config);
            std::cout << metrics.dump(2) << "\n";
        }
    } catch (const hcc::Error& e) {
        std::cerr << "error [" << e.kind() << "] " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
