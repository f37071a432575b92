#pragma once

#include "hcc/sparse.hpp"

#include <vector>

namespace hcc {

// Minimum-cost assignment (square or n_rows <= n_cols rectangular cost).
// Returns row -> column. O(n^2 m) potentials method; exposed so tests can
// pit it against exhaustive search.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost);

// Best cluster-to-class bijection under the confusion counts, via the
// Hungarian algorithm on negated counts. Entry c -> matched class, or -1
// for clusters paired with a padding column.
std::vector<int> best_label_matching(const std::vector<int>& pred,
                                     const std::vector<int>& truth);

// Hungarian-matched clustering accuracy in [0,1].
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Mutual information normalized by the arithmetic mean of the entropies.
// Constant labelings: 1 when both sides are constant, else 0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Support-weighted F1 after aligning pred to truth with the accuracy
// matching, so ACC and F1 describe the same correspondence.
double f1_weighted(const std::vector<int>& pred, const std::vector<int>& truth);

// Adjusted Rand index in [-1,1] via pair counting.
double ari(const std::vector<int>& pred, const std::vector<int>& truth);

struct LabeledEvaluation {
    double acc = 0.0;
    double nmi = 0.0;
    double f1 = 0.0;
    double ari = 0.0;
    std::vector<std::vector<index_t>> confusion; // cluster x class counts
    std::vector<int> matching;                   // cluster -> class (or -1)
};

LabeledEvaluation evaluate_labels(const std::vector<int>& pred,
                                  const std::vector<int>& truth);

// Ground-truth class per word from the class-conditional word distribution:
// word w gets argmax_c p(w|c) where p(.|c) aggregates the raw counts of all
// documents in class c. Ties break toward the lowest class id; words with
// zero total count get label -1 and a warning.
std::vector<int> word_ground_truth(const CsrMatrix& counts,
                                   const std::vector<int>& doc_labels,
                                   int n_classes);

} // namespace hcc
