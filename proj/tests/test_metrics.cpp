#include "hcc/metrics.hpp"

#include "hcc/errors.hpp"
#include "hcc/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace hcc;

namespace {

// Independent pair-counting Rand statistic: walks every pair once.
double brute_force_ari(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same_a = a[i] == a[j];
            const bool same_b = b[i] == b[j];
            if (same_a && same_b) ++n11;
            else if (same_a) ++n10;
            else if (same_b) ++n01;
            else ++n00;
        }
    }
    const double total = n11 + n10 + n01 + n00;
    const double expected = (n11 + n10) * (n11 + n01) / total;
    const double max_index = 0.5 * ((n11 + n10) + (n11 + n01));
    if (max_index == expected) {
        // Degenerate: identical single-cluster partitions mean perfect
        // agreement, anything else reads as chance level.
        return (n10 == 0 && n01 == 0) ? 1.0 : 0.0;
    }
    return (n11 - expected) / (max_index - expected);
}

// Exhaustive assignment search over cluster->class bijections (k <= 4).
double brute_force_accuracy(const std::vector<int>& pred,
                            const std::vector<int>& truth) {
    const int kp = 1 + *std::max_element(pred.begin(), pred.end());
    const int kt = 1 + *std::max_element(truth.begin(), truth.end());
    const int s = std::max(kp, kt);
    std::vector<int> perm(static_cast<std::size_t>(s));
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (perm[static_cast<std::size_t>(pred[i])] == truth[i]) ++correct;
        best = std::max(best, correct);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(pred.size());
}

std::vector<int> random_labels(std::size_t n, int k, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> out(n);
    for (auto& l : out) l = pick(rng);
    return out;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("accuracy: identity, permutation, and the 4-point fixture") {
    const std::vector<int> truth = {0, 1, 1, 1};
    CHECK(accuracy(truth, truth) == 1.0);
    const std::vector<int> permuted = {1, 0, 0, 0};
    CHECK(accuracy(permuted, truth) == 1.0);
    CHECK(accuracy({0, 0, 1, 1}, truth) == 0.75);
    CHECK_THROWS_AS(accuracy({0, 1}, {0, 1, 2}), LengthMismatch);
}

TEST_CASE("accuracy equals exhaustive bijection search") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int k = 2 + static_cast<int>(seed % 3); // up to 4 with kt below
        const std::vector<int> pred = random_labels(12, k, seed);
        const std::vector<int> truth = random_labels(12, 2 + static_cast<int>(seed % 2),
                                                     seed + 999);
        CHECK(accuracy(pred, truth) ==
              doctest::Approx(brute_force_accuracy(pred, truth)).epsilon(1e-14));
    }
}

TEST_CASE("hungarian solves small assignment problems exactly") {
    // Cost matrix with a unique optimum: rows to columns 2,0,1.
    const std::vector<std::vector<double>> cost = {
        {5, 9, 1}, {2, 8, 7}, {6, 3, 9}};
    const std::vector<int> assign = hungarian_min(cost);
    CHECK(assign == std::vector<int>{2, 0, 1});
}

TEST_CASE("nmi fixtures from the direct entropy formula") {
    CHECK(nmi({0, 1, 0, 1}, {0, 1, 0, 1}) == 1.0);
    // Independent small case: joint splits evenly, MI = 0.
    CHECK(nmi({0, 1, 0, 1}, {0, 0, 1, 1}) == 0.0);

    // pred = [0,0,1,1], truth = [0,1,1,1]: counts give
    // MI = 1/4 ln 2 + 1/4 ln(2/3) + 1/2 ln(4/3),
    // H(pred) = ln 2, H(truth) = -(1/4 ln 1/4 + 3/4 ln 3/4).
    const double mi = 0.25 * std::log(2.0) + 0.25 * std::log(2.0 / 3.0) +
                      0.5 * std::log(4.0 / 3.0);
    const double h_pred = std::log(2.0);
    const double h_truth =
        -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
    const double expected = mi / (0.5 * (h_pred + h_truth));
    CHECK(nmi({0, 0, 1, 1}, {0, 1, 1, 1}) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("nmi degenerate single-cluster rules") {
    CHECK(nmi({0, 0, 0}, {1, 1, 1}) == 1.0); // identical partitions
    CHECK(nmi({0, 0, 0}, {0, 1, 1}) == 0.0);
    CHECK(nmi({0, 1, 1}, {2, 2, 2}) == 0.0);
}

TEST_CASE("weighted f1 fixtures") {
    CHECK(f1_weighted({1, 0, 0, 0}, {0, 1, 1, 1}) == 1.0);
    // Aligned fixture: class 0 has F1 = 2/3 with weight 1/4, class 1 has
    // F1 = 4/5 with weight 3/4; the weighted mean is 23/30.
    CHECK(f1_weighted({0, 0, 1, 1}, {0, 1, 1, 1}) ==
          doctest::Approx(23.0 / 30.0).epsilon(1e-12));
    // A fully missed class contributes zero with its support weight:
    // pred collapses everything into one cluster; only the majority class
    // scores.
    const double f1 = f1_weighted({0, 0, 0, 0}, {0, 0, 0, 1});
    // Matched cluster -> class 0: P = 3/4, R = 1, F1 = 6/7, weight 3/4.
    CHECK(f1 == doctest::Approx((6.0 / 7.0) * 0.75).epsilon(1e-12));
}

TEST_CASE("ari fixtures pinned by the pair-counting oracle") {
    CHECK(ari({0, 1, 2, 0}, {0, 1, 2, 0}) == 1.0);
    const std::vector<int> pred = {0, 0, 1, 1};
    const std::vector<int> truth = {0, 1, 0, 1};
    const double expected = brute_force_ari(pred, truth);
    CHECK(expected == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(ari(pred, truth) == doctest::Approx(expected).epsilon(1e-14));
    // Constant prediction vs two classes: chance level.
    CHECK(ari({0, 0, 0, 0}, {0, 0, 1, 1}) == 0.0);
}

TEST_CASE("ari equals brute-force pair counting on random labelings") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::vector<int> a = random_labels(10, 3, seed);
        const std::vector<int> b = random_labels(10, 3, seed + 12345);
        CHECK(ari(a, b) == doctest::Approx(brute_force_ari(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("metric symmetry and permutation invariance") {
    const std::vector<int> a = random_labels(40, 3, 1);
    const std::vector<int> b = random_labels(40, 4, 2);
    CHECK(ari(a, b) == doctest::Approx(ari(b, a)).epsilon(1e-14));
    CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-14));

    std::vector<int> shuffled = a;
    for (auto& l : shuffled) l = (l + 2) % 3;
    CHECK(accuracy(shuffled, b) == doctest::Approx(accuracy(a, b)).epsilon(1e-14));
    CHECK(nmi(shuffled, b) == doctest::Approx(nmi(a, b)).epsilon(1e-14));
    CHECK(f1_weighted(shuffled, b) ==
          doctest::Approx(f1_weighted(a, b)).epsilon(1e-14));
    CHECK(ari(shuffled, b) == doctest::Approx(ari(a, b)).epsilon(1e-14));
}

TEST_CASE("constant prediction scores the majority-class fraction") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::vector<int> truth = random_labels(30, 3, seed);
        std::vector<int> counts(3, 0);
        for (int t : truth) ++counts[static_cast<std::size_t>(t)];
        const double majority =
            static_cast<double>(*std::max_element(counts.begin(), counts.end())) / 30.0;
        CHECK(accuracy(std::vector<int>(30, 0), truth) ==
              doctest::Approx(majority).epsilon(1e-14));
    }
}

TEST_CASE("evaluate_labels bundles all four metrics with the matching") {
    const std::vector<int> pred = {0, 0, 1, 1};
    const std::vector<int> truth = {0, 1, 1, 1};
    const LabeledEvaluation ev = evaluate_labels(pred, truth);
    CHECK(ev.acc == 0.75);
    CHECK(ev.f1 == doctest::Approx(23.0 / 30.0).epsilon(1e-12));
    CHECK(ev.matching == std::vector<int>{0, 1});
    CHECK(ev.confusion[0][0] == 1);
    CHECK(ev.confusion[0][1] == 1);
    CHECK(ev.confusion[1][1] == 2);
}

TEST_CASE("word ground truth from class-conditional distributions") {
    // 3 docs, 4 words; classes 0 and 1.
    // doc0 (class 0): word0 x4, word2 x1
    // doc1 (class 0): word0 x2, word1 x1
    // doc2 (class 1): word1 x3, word2 x3
    const CsrMatrix counts = CsrMatrix::from_triplets(
        3, 4, {{0, 0, 4.0}, {0, 2, 1.0}, {1, 0, 2.0}, {1, 1, 1.0},
               {2, 1, 3.0}, {2, 2, 3.0}});
    const std::vector<int> labels = word_ground_truth(counts, {0, 0, 1}, 2);
    // p(word0|c0) = 6/8 vs p(word0|c1) = 0 -> class 0
    // p(word1|c0) = 1/8 vs p(word1|c1) = 3/6 -> class 1
    // p(word2|c0) = 1/8 vs p(word2|c1) = 3/6 -> class 1
    // word3 unseen -> -1
    CHECK(labels == std::vector<int>{0, 1, 1, -1});
}

TEST_CASE("word ground truth ties break toward the lowest class") {
    const CsrMatrix counts = CsrMatrix::from_triplets(
        2, 2, {{0, 0, 2.0}, {0, 1, 2.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    const std::vector<int> labels = word_ground_truth(counts, {0, 1}, 2);
    CHECK(labels == std::vector<int>{0, 0});
}

TEST_CASE("word appearing only in one class gets that class") {
    const CsrMatrix counts = CsrMatrix::from_triplets(
        3, 2, {{0, 0, 5.0}, {1, 0, 2.0}, {2, 1, 7.0}});
    const std::vector<int> labels = word_ground_truth(counts, {0, 1, 2}, 3);
    CHECK(labels[1] == 2);
}

} // TEST_SUITE
