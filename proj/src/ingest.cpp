#include "hcc/ingest.hpp"

#include "hcc/errors.hpp"
#include "hcc/stopwords_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace hcc {

void validate_config(const IngestConfig& config) {
    if (!(config.min_df > 0.0 && config.min_df < config.max_df &&
          config.max_df <= 1.0))
        throw InvalidArgument("need 0 < min_df < max_df <= 1 (got min_df = " +
                              std::to_string(config.min_df) + ", max_df = " +
                              std::to_string(config.max_df) + ")");
    if (config.vocab_size < 1)
        throw InvalidArgument("vocab_size must be >= 1");
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = [] {
        std::set<std::string> s;
        std::istringstream in(kBundledStopwords);
        std::string word;
        while (in >> word) s.insert(word);
        return s;
    }();
    return words;
}

std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open stopword list " + path);
    std::set<std::string> s;
    std::string word;
    while (in >> word) s.insert(word);
    return s;
}

namespace {

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        const auto uc = static_cast<unsigned char>(ch);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace

CorpusMatrix tokenize_corpus(const std::vector<std::string>& docs,
                             const std::vector<std::string>& doc_ids,
                             const std::vector<int>& doc_labels,
                             const IngestConfig& config) {
    if (docs.empty()) throw EmptyCorpus("no documents");
    if (doc_ids.size() != docs.size())
        throw LengthMismatch("doc_ids length != number of documents");
    if (!doc_labels.empty() && doc_labels.size() != docs.size())
        throw LengthMismatch("doc_labels length != number of documents");
    const std::set<std::string>& stop =
        config.stopwords.empty() ? default_stopwords() : config.stopwords;

    // Token counting is independent per document; the merge below walks
    // documents in order so the result never depends on scheduling.
    std::vector<std::map<std::string, index_t>> per_doc(docs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (std::string& tok : split_tokens(docs[d])) {
            if (tok.size() < 2) continue;
            if (stop.count(tok)) continue;
            ++per_doc[d][std::move(tok)];
        }
    }

    std::map<std::string, index_t> vocab_index;
    for (const auto& counts : per_doc)
        for (const auto& [word, count] : counts) vocab_index.emplace(word, 0);
    if (vocab_index.empty())
        throw EmptyCorpus("no tokens survive tokenization");
    index_t next = 0;
    for (auto& [word, idx] : vocab_index) idx = next++;

    CorpusMatrix cm;
    std::vector<Triplet> entries;
    index_t kept = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (per_doc[d].empty()) {
            warn("document '" + doc_ids[d] + "' has no usable tokens; dropped");
            continue;
        }
        for (const auto& [word, count] : per_doc[d])
            entries.push_back({kept, vocab_index.at(word),
                               static_cast<double>(count)});
        cm.doc_ids.push_back(doc_ids[d]);
        if (!doc_labels.empty()) cm.doc_labels.push_back(doc_labels[d]);
        ++kept;
    }
    if (kept == 0) throw EmptyCorpus("every document was dropped");

    cm.vocab.resize(static_cast<std::size_t>(next));
    for (const auto& [word, idx] : vocab_index)
        cm.vocab[static_cast<std::size_t>(idx)] = word;
    cm.counts = CsrMatrix::from_triplets(kept, next, std::move(entries));
    return cm;
}

CorpusMatrix filter_vocabulary(const CorpusMatrix& cm, const IngestConfig& config) {
    validate_config(config);
    const index_t n_docs = cm.counts.rows();
    const index_t n_words = cm.counts.cols();

    std::vector<index_t> df(static_cast<std::size_t>(n_words), 0);
    std::vector<double> total(static_cast<std::size_t>(n_words), 0.0);
    for (index_t d = 0; d < n_docs; ++d) {
        const auto cols = cm.counts.row_indices(d);
        const auto vals = cm.counts.row_values(d);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            ++df[static_cast<std::size_t>(cols[k])];
            total[static_cast<std::size_t>(cols[k])] += vals[k];
        }
    }

    const double hi = config.max_df * static_cast<double>(n_docs);
    const double lo = config.min_df * static_cast<double>(n_docs);
    std::vector<index_t> candidates;
    for (index_t w = 0; w < n_words; ++w) {
        const auto d = static_cast<double>(df[static_cast<std::size_t>(w)]);
        if (d > hi || d < lo) continue; // strict: at-threshold words stay
        candidates.push_back(w);
    }
    if (candidates.empty())
        throw VocabularyEmpty("document-frequency filter removed every word");

    // Rank by total frequency; candidates are word-id sorted, so the stable
    // sort breaks frequency ties lexicographically.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](index_t a, index_t b) {
                         return total[static_cast<std::size_t>(a)] >
                                total[static_cast<std::size_t>(b)];
                     });
    if (static_cast<index_t>(candidates.size()) > config.vocab_size)
        candidates.resize(static_cast<std::size_t>(config.vocab_size));
    std::sort(candidates.begin(), candidates.end());

    std::vector<index_t> remap(static_cast<std::size_t>(n_words), -1);
    CorpusMatrix out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        remap[static_cast<std::size_t>(candidates[i])] = static_cast<index_t>(i);
        out.vocab.push_back(cm.vocab[static_cast<std::size_t>(candidates[i])]);
    }

    std::vector<Triplet> entries;
    index_t kept_docs = 0;
    for (index_t d = 0; d < n_docs; ++d) {
        const auto cols = cm.counts.row_indices(d);
        const auto vals = cm.counts.row_values(d);
        bool any = false;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const index_t w = remap[static_cast<std::size_t>(cols[k])];
            if (w < 0) continue;
            entries.push_back({kept_docs, w, vals[k]});
            any = true;
        }
        if (!any) {
            warn("document '" + cm.doc_ids[static_cast<std::size_t>(d)] +
                 "' empty after vocabulary filtering; dropped");
            continue;
        }
        out.doc_ids.push_back(cm.doc_ids[static_cast<std::size_t>(d)]);
        if (!cm.doc_labels.empty())
            out.doc_labels.push_back(cm.doc_labels[static_cast<std::size_t>(d)]);
        ++kept_docs;
    }
    if (kept_docs == 0)
        throw EmptyCorpus("every document empty after vocabulary filtering");
    out.counts = CsrMatrix::from_triplets(
        kept_docs, static_cast<index_t>(out.vocab.size()), std::move(entries));
    out.class_names = cm.class_names;
    return out;
}

CsrMatrix tfidf(const CorpusMatrix& cm, TfidfVariant variant) {
    const index_t n_docs = cm.counts.rows();
    const index_t n_words = cm.counts.cols();
    std::vector<index_t> df(static_cast<std::size_t>(n_words), 0);
    for (index_t d = 0; d < n_docs; ++d)
        for (index_t w : cm.counts.row_indices(d))
            ++df[static_cast<std::size_t>(w)];

    Eigen::VectorXd idf(n_words);
    for (index_t w = 0; w < n_words; ++w) {
        const auto dfw = static_cast<double>(df[static_cast<std::size_t>(w)]);
        if (dfw == 0.0) {
            idf[w] = 0.0; // column is all-zero anyway
        } else if (variant == TfidfVariant::smooth) {
            idf[w] = std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + dfw)) + 1.0;
        } else {
            idf[w] = std::log(static_cast<double>(n_docs) / dfw) + 1.0;
        }
    }
    CsrMatrix out = cm.counts;
    out.scale_cols(idf);
    return out;
}

TextHypergraphResult build_text_hypergraph(const CsrMatrix& tfidf_matrix,
                                           Direction direction,
                                           WeightStd weight_std) {
    // Weighting matrix: hyperedges are rows.
    const CsrMatrix m = direction == Direction::docs_as_vertices
                            ? tfidf_matrix.transposed()
                            : tfidf_matrix;
    const index_t ne_all = m.rows();
    const index_t nv_all = m.cols();

    TextHypergraphResult out;
    std::vector<double> omega_kept;
    std::vector<Triplet> entries;
    for (index_t e = 0; e < ne_all; ++e) {
        const auto cols = m.row_indices(e);
        const auto vals = m.row_values(e);
        double sum = 0.0, sumsq = 0.0;
        for (double v : vals) {
            sum += v;
            sumsq += v * v;
        }
        const double denom = weight_std == WeightStd::all_entries
                                 ? static_cast<double>(nv_all)
                                 : static_cast<double>(vals.size());
        double sigma = 0.0;
        if (denom > 0.0) {
            const double mean = sum / denom;
            const double var = std::max(0.0, sumsq / denom - mean * mean);
            sigma = std::sqrt(var);
        }
        if (!(sigma > 0.0)) {
            ++out.dropped_hyperedges;
            continue;
        }
        const auto new_e = static_cast<index_t>(omega_kept.size());
        for (std::size_t k = 0; k < cols.size(); ++k)
            entries.push_back({new_e, cols[k], vals[k]});
        omega_kept.push_back(sigma);
        out.hyperedge_ids.push_back(e);
    }
    if (out.dropped_hyperedges > 0)
        warn(std::to_string(out.dropped_hyperedges) +
             " hyperedges dropped (zero standard deviation)");
    if (omega_kept.empty())
        throw ZeroWeightHyperedge("every hyperedge has zero standard deviation");

    // Drop vertices that lost all memberships.
    std::vector<char> seen(static_cast<std::size_t>(nv_all), 0);
    for (const auto& t : entries) seen[static_cast<std::size_t>(t.col)] = 1;
    std::vector<index_t> vmap(static_cast<std::size_t>(nv_all), -1);
    for (index_t v = 0; v < nv_all; ++v) {
        if (seen[static_cast<std::size_t>(v)]) {
            vmap[static_cast<std::size_t>(v)] = static_cast<index_t>(out.vertex_ids.size());
            out.vertex_ids.push_back(v);
        } else {
            ++out.dropped_vertices;
        }
    }
    if (out.dropped_vertices > 0)
        warn(std::to_string(out.dropped_vertices) +
             " vertices dropped (no remaining hyperedges)");
    for (auto& t : entries) t.col = vmap[static_cast<std::size_t>(t.col)];

    const CsrMatrix r = CsrMatrix::from_triplets(
        static_cast<index_t>(omega_kept.size()),
        static_cast<index_t>(out.vertex_ids.size()), std::move(entries));
    Eigen::VectorXd omega(static_cast<index_t>(omega_kept.size()));
    for (std::size_t i = 0; i < omega_kept.size(); ++i)
        omega[static_cast<index_t>(i)] = omega_kept[i];
    out.h = build_hypergraph(r, omega, /*allow_disconnected=*/true);
    return out;
}

namespace {

// labels.csv: header `id,label`, one row per document.
std::unordered_map<std::string, std::string> read_label_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("id,label", 0) != 0)
        throw IOFailure(path + " must start with an 'id,label' header");
    std::unordered_map<std::string, std::string> map;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IOFailure("malformed line in " + path + ": " + line);
        map[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return map;
}

// Map label strings to dense ids, sorted so the assignment is stable.
void assign_class_ids(const std::vector<std::string>& raw, CorpusMatrix& cm) {
    std::vector<std::string> uniq(raw);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    cm.class_names = uniq;
    cm.doc_labels.clear();
    for (const auto& s : raw)
        cm.doc_labels.push_back(static_cast<int>(
            std::lower_bound(uniq.begin(), uniq.end(), s) - uniq.begin()));
}

} // namespace

CorpusMatrix load_corpus_dir(const std::string& dir, const IngestConfig& config) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IOFailure(dir + " is not a directory");

    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw EmptyCorpus("no .txt files in " + dir);

    std::vector<std::string> docs, ids;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw IOFailure("cannot open " + p);
        std::stringstream buffer;
        buffer << in.rdbuf();
        docs.push_back(buffer.str());
        ids.push_back(fs::path(p).stem().string());
    }

    std::vector<int> labels;
    std::vector<std::string> raw_labels;
    const std::string label_path = dir + "/labels.csv";
    if (fs::exists(label_path)) {
        const auto map = read_label_map(label_path);
        for (const auto& id : ids) {
            const auto it = map.find(id);
            if (it == map.end())
                throw IOFailure("no label for document '" + id + "' in " + label_path);
            raw_labels.push_back(it->second);
        }
    }

    CorpusMatrix cm = tokenize_corpus(docs, ids, {}, config);
    if (!raw_labels.empty()) {
        // Align labels with the documents tokenization kept.
        std::unordered_map<std::string, std::string> by_id;
        for (std::size_t i = 0; i < ids.size(); ++i) by_id[ids[i]] = raw_labels[i];
        std::vector<std::string> kept;
        for (const auto& id : cm.doc_ids) kept.push_back(by_id.at(id));
        assign_class_ids(kept, cm);
    }
    return cm;
}

CorpusMatrix load_prebuilt_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    CorpusMatrix cm;
    cm.counts = read_matrix_market(dir + "/counts.mtx");
    for (const auto& t : cm.counts.to_triplets())
        if (t.value < 0.0)
            throw NonPositiveWeight("counts.mtx has a negative entry");

    std::ifstream vf(dir + "/vocab.txt");
    if (!vf) throw IOFailure("cannot open " + dir + "/vocab.txt");
    std::string word;
    while (std::getline(vf, word))
        if (!word.empty()) cm.vocab.push_back(word);
    if (static_cast<index_t>(cm.vocab.size()) != cm.counts.cols())
        throw LengthMismatch("vocab.txt has " + std::to_string(cm.vocab.size()) +
                             " words, counts.mtx has " +
                             std::to_string(cm.counts.cols()) + " columns");

    for (index_t d = 0; d < cm.counts.rows(); ++d)
        cm.doc_ids.push_back(std::to_string(d));

    const std::string label_path = dir + "/labels.csv";
    if (fs::exists(label_path)) {
        std::ifstream in(label_path);
        std::string line;
        std::getline(in, line); // header
        std::vector<std::string> raw;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            raw.push_back(comma == std::string::npos ? line : line.substr(comma + 1));
        }
        if (static_cast<index_t>(raw.size()) != cm.counts.rows())
            throw LengthMismatch("labels.csv rows != number of documents");
        assign_class_ids(raw, cm);
    }
    return cm;
}

void save_corpus(const std::string& dir, const CorpusMatrix& cm) {
    std::filesystem::create_directories(dir);
    write_matrix_market(dir + "/counts.mtx", cm.counts);
    std::ofstream vf(dir + "/vocab.txt");
    if (!vf) throw IOFailure("cannot write " + dir + "/vocab.txt");
    for (const auto& w : cm.vocab) vf << w << "\n";
    if (!cm.doc_labels.empty()) {
        std::ofstream lf(dir + "/labels.csv");
        if (!lf) throw IOFailure("cannot write " + dir + "/labels.csv");
        lf << "id,label\n";
        for (std::size_t d = 0; d < cm.doc_ids.size(); ++d) {
            const int c = cm.doc_labels[d];
            lf << cm.doc_ids[d] << ","
               << (cm.class_names.empty() ? std::to_string(c)
                                          : cm.class_names[static_cast<std::size_t>(c)])
               << "\n";
        }
    }
}

} // namespace hcc
