#include "hcc/metrics.hpp"

#include "hcc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hcc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw LengthMismatch("pred has " + std::to_string(pred.size()) +
                             " labels, truth has " + std::to_string(truth.size()));
    if (pred.empty()) throw InvalidArgument("empty label vectors");
}

// Remap arbitrary labels to 0..k-1 (sorted by original value).
std::vector<int> compact(const std::vector<int>& labels, int* k_out) {
    std::vector<int> uniq(labels);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[i] = static_cast<int>(
            std::lower_bound(uniq.begin(), uniq.end(), labels[i]) - uniq.begin());
    *k_out = static_cast<int>(uniq.size());
    return out;
}

std::vector<std::vector<index_t>> confusion_counts(const std::vector<int>& pred,
                                                   int kp,
                                                   const std::vector<int>& truth,
                                                   int kt) {
    std::vector<std::vector<index_t>> c(static_cast<std::size_t>(kp),
                                        std::vector<index_t>(static_cast<std::size_t>(kt), 0));
    for (std::size_t i = 0; i < pred.size(); ++i)
        ++c[static_cast<std::size_t>(pred[i])][static_cast<std::size_t>(truth[i])];
    return c;
}

double comb2(double n) { return n * (n - 1.0) / 2.0; }

} // namespace

std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) throw InvalidArgument("empty cost matrix");
    const int m = static_cast<int>(cost[0].size());
    if (m < n) throw InvalidArgument("cost matrix needs n_rows <= n_cols");

    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
        std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0) - 1]
                                       [static_cast<std::size_t>(j) - 1] -
                                   u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= m; ++j)
        if (p[static_cast<std::size_t>(j)] > 0)
            row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] = j - 1;
    return row_to_col;
}

std::vector<int> best_label_matching(const std::vector<int>& pred,
                                     const std::vector<int>& truth) {
    check_lengths(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> cp = compact(pred, &kp);
    const std::vector<int> ct = compact(truth, &kt);
    const auto conf = confusion_counts(cp, kp, ct, kt);

    // Pad to square; padded columns mean "matched to nothing".
    const int s = std::max(kp, kt);
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(s),
                                          std::vector<double>(static_cast<std::size_t>(s), 0.0));
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < kt; ++j)
            cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                -static_cast<double>(conf[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    std::vector<int> assign = hungarian_min(cost);
    assign.resize(static_cast<std::size_t>(kp));
    for (int& a : assign)
        if (a >= kt) a = -1;
    return assign;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    check_lengths(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> cp = compact(pred, &kp);
    const std::vector<int> ct = compact(truth, &kt);
    const std::vector<int> match = best_label_matching(pred, truth);
    index_t correct = 0;
    for (std::size_t i = 0; i < cp.size(); ++i)
        if (match[static_cast<std::size_t>(cp[i])] == ct[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(cp.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    check_lengths(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> cp = compact(pred, &kp);
    const std::vector<int> ct = compact(truth, &kt);
    if (kp == 1 || kt == 1) return (kp == 1 && kt == 1) ? 1.0 : 0.0;

    const auto conf = confusion_counts(cp, kp, ct, kt);
    const double n = static_cast<double>(cp.size());
    std::vector<double> pi(static_cast<std::size_t>(kp), 0.0);
    std::vector<double> pj(static_cast<std::size_t>(kt), 0.0);
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < kt; ++j) {
            const double pij = static_cast<double>(
                conf[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) / n;
            pi[static_cast<std::size_t>(i)] += pij;
            pj[static_cast<std::size_t>(j)] += pij;
        }
    double mi = 0.0, hu = 0.0, hv = 0.0;
    for (int i = 0; i < kp; ++i)
        for (int j = 0; j < kt; ++j) {
            const double pij = static_cast<double>(
                conf[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) / n;
            if (pij > 0.0)
                mi += pij * std::log(pij / (pi[static_cast<std::size_t>(i)] *
                                            pj[static_cast<std::size_t>(j)]));
        }
    for (double p : pi)
        if (p > 0.0) hu -= p * std::log(p);
    for (double p : pj)
        if (p > 0.0) hv -= p * std::log(p);
    const double denom = 0.5 * (hu + hv);
    return denom > 0.0 ? mi / denom : 0.0;
}

double f1_weighted(const std::vector<int>& pred, const std::vector<int>& truth) {
    check_lengths(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> cp = compact(pred, &kp);
    const std::vector<int> ct = compact(truth, &kt);
    const std::vector<int> match = best_label_matching(pred, truth);

    const std::size_t n = cp.size();
    double f1_sum = 0.0;
    for (int c = 0; c < kt; ++c) {
        index_t tp = 0, fp = 0, fn = 0, support = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int aligned = match[static_cast<std::size_t>(cp[i])];
            if (ct[i] == c) {
                ++support;
                aligned == c ? ++tp : ++fn;
            } else if (aligned == c) {
                ++fp;
            }
        }
        const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        const double f1 = precision + recall > 0.0
                              ? 2.0 * precision * recall / (precision + recall)
                              : 0.0;
        f1_sum += f1 * static_cast<double>(support);
    }
    return f1_sum / static_cast<double>(n);
}

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
    check_lengths(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> cp = compact(pred, &kp);
    const std::vector<int> ct = compact(truth, &kt);

    const auto conf = confusion_counts(cp, kp, ct, kt);
    const double n = static_cast<double>(cp.size());
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (int i = 0; i < kp; ++i) {
        double row = 0.0;
        for (int j = 0; j < kt; ++j) {
            const auto c = conf[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            index += comb2(static_cast<double>(c));
            row += static_cast<double>(c);
        }
        sum_a += comb2(row);
    }
    for (int j = 0; j < kt; ++j) {
        double col = 0.0;
        for (int i = 0; i < kp; ++i)
            col += static_cast<double>(
                conf[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        sum_b += comb2(col);
    }
    // No disagreeing pairs (sum_a - index same-pred-only, sum_b - index
    // same-truth-only): the partitions are identical, including the
    // all-singletons case where the adjusted formula turns 0/0.
    if (sum_a - index == 0.0 && sum_b - index == 0.0) return 1.0;
    const double expected = sum_a * sum_b / comb2(n);
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom = max_index - expected;
    if (denom == 0.0) return 0.0;
    return (index - expected) / denom;
}

LabeledEvaluation evaluate_labels(const std::vector<int>& pred,
                                  const std::vector<int>& truth) {
    check_lengths(pred, truth);
    int kp = 0, kt = 0;
    const std::vector<int> cp = compact(pred, &kp);
    const std::vector<int> ct = compact(truth, &kt);
    LabeledEvaluation ev;
    ev.acc = accuracy(pred, truth);
    ev.nmi = nmi(pred, truth);
    ev.f1 = f1_weighted(pred, truth);
    ev.ari = ari(pred, truth);
    ev.confusion = confusion_counts(cp, kp, ct, kt);
    ev.matching = best_label_matching(pred, truth);
    return ev;
}

std::vector<int> word_ground_truth(const CsrMatrix& counts,
                                   const std::vector<int>& doc_labels,
                                   int n_classes) {
    const index_t n_docs = counts.rows();
    const index_t n_words = counts.cols();
    if (static_cast<index_t>(doc_labels.size()) != n_docs)
        throw LengthMismatch("doc_labels length != number of documents");
    if (n_classes < 1) throw InvalidArgument("need n_classes >= 1");

    // Aggregate counts per class, then normalize by the class total so each
    // column of `agg` compares probabilities across classes.
    Eigen::MatrixXd agg = Eigen::MatrixXd::Zero(n_classes, n_words);
    Eigen::VectorXd class_total = Eigen::VectorXd::Zero(n_classes);
    for (index_t d = 0; d < n_docs; ++d) {
        const int c = doc_labels[static_cast<std::size_t>(d)];
        if (c < 0 || c >= n_classes)
            throw InvalidArgument("doc label " + std::to_string(c) +
                                  " outside [0," + std::to_string(n_classes) + ")");
        const auto cols = counts.row_indices(d);
        const auto vals = counts.row_values(d);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            agg(c, cols[k]) += vals[k];
            class_total[c] += vals[k];
        }
    }

    std::vector<int> labels(static_cast<std::size_t>(n_words), -1);
    index_t unseen = 0;
    for (index_t w = 0; w < n_words; ++w) {
        int best = -1;
        double best_p = -1.0;
        double total = 0.0;
        for (int c = 0; c < n_classes; ++c) {
            total += agg(c, w);
            const double p = class_total[c] > 0.0 ? agg(c, w) / class_total[c] : 0.0;
            if (p > best_p) {
                best_p = p;
                best = c;
            }
        }
        if (total > 0.0) {
            labels[static_cast<std::size_t>(w)] = best;
        } else {
            ++unseen;
        }
    }
    if (unseen > 0)
        warn("word_ground_truth: " + std::to_string(unseen) +
             " words with zero total count excluded (label -1)");
    return labels;
}

} // namespace hcc
