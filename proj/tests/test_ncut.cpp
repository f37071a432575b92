#include "hcc/ncut.hpp"

#include "hcc/embed.hpp"
#include "hcc/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace hcc;

namespace {

CsrMatrix four_cycle() {
    std::vector<Triplet> entries;
    for (index_t i = 0; i < 4; ++i) {
        const index_t j = (i + 1) % 4;
        entries.push_back({i, j, 1.0});
        entries.push_back({j, i, 1.0});
    }
    return CsrMatrix::from_triplets(4, 4, std::move(entries));
}

// Symmetric random graph with all-positive degrees (cycle backbone).
CsrMatrix random_graph(index_t n, double density, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> weight(0.1, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Triplet> entries;
    const auto add = [&](index_t i, index_t j, double w) {
        entries.push_back({i, j, w});
        entries.push_back({j, i, w});
    };
    for (index_t i = 0; i < n; ++i) add(i, (i + 1) % n, weight(rng));
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i + 2; j < n; ++j)
            if (unit(rng) < density) add(i, j, weight(rng));
    return CsrMatrix::from_triplets(n, n, std::move(entries));
}

std::vector<int> random_partition(index_t n, int k, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = pick(rng);
    for (int c = 0; c < k; ++c) labels[static_cast<std::size_t>(c)] = c; // nonempty
    return labels;
}

} // namespace

TEST_SUITE("ncut") {

TEST_CASE("four-cycle split into adjacent pairs") {
    const CsrMatrix a = four_cycle();
    const std::vector<int> labels = {0, 0, 1, 1};
    const CutVolume cv = cut_and_vol(a, labels, 2);
    CHECK(cv.cut[0] == 2.0);
    CHECK(cv.cut[1] == 2.0);
    CHECK(cv.vol[0] == 4.0);
    CHECK(cv.vol[1] == 4.0);
    CHECK(ncut(a, labels, 2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single cluster: zero cut, full volume") {
    const CsrMatrix a = four_cycle();
    const std::vector<int> labels = {0, 0, 0, 0};
    const CutVolume cv = cut_and_vol(a, labels, 1);
    CHECK(cv.cut[0] == 0.0);
    CHECK(cv.vol[0] == 8.0);
    CHECK(ncut(a, labels, 1) == 0.0);
}

TEST_CASE("splitting disconnected components costs nothing") {
    std::vector<Triplet> entries = {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}};
    const CsrMatrix a = CsrMatrix::from_triplets(4, 4, std::move(entries));
    CHECK(ncut(a, {0, 0, 1, 1}, 2) == 0.0);
}

TEST_CASE("empty cluster is rejected") {
    const CsrMatrix a = four_cycle();
    CHECK_THROWS_AS(cut_and_vol(a, {0, 0, 0, 0}, 2), EmptyCluster);
}

TEST_CASE("trace identity and indicator orthogonality on random pairs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const index_t n = 8 + static_cast<index_t>(seed % 9);
        const int k = 2 + static_cast<int>(seed % 3);
        const CsrMatrix a = random_graph(n, 0.3, seed);
        const std::vector<int> labels = random_partition(n, k, seed + 1000);

        const Eigen::MatrixXd ad = a.to_dense();
        const Eigen::VectorXd deg = ad.rowwise().sum();
        const Eigen::MatrixXd lg = Eigen::MatrixXd(deg.asDiagonal()) - ad;
        const Eigen::MatrixXd q = partition_indicator(a, labels, k);

        CHECK(std::abs((q.transpose() * lg * q).trace() - ncut(a, labels, k)) <= 1e-10);
        const Eigen::MatrixXd qdq =
            q.transpose() * Eigen::MatrixXd(deg.asDiagonal()) * q;
        CHECK((qdq - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("ncut is invariant under uniform scaling of the adjacency") {
    const CsrMatrix a = random_graph(12, 0.3, 7);
    CsrMatrix scaled = a;
    for (double& v : scaled.values_mut()) v *= 7.5;
    const std::vector<int> labels = random_partition(12, 3, 8);
    CHECK(ncut(a, labels, 3) ==
          doctest::Approx(ncut(scaled, labels, 3)).epsilon(1e-12));
}

TEST_CASE("any partition of a connected graph has positive ncut") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const CsrMatrix a = random_graph(10, 0.3, seed + 50);
        const std::vector<int> labels = random_partition(10, 2, seed + 60);
        CHECK(ncut(a, labels, 2) > 0.0);
    }
}

TEST_CASE("relaxed embedding starts with the constant eigenvector") {
    const CsrMatrix a = random_graph(14, 0.3, 9);
    SvdOptions opts;
    opts.seed = 1;
    opts.tol = 1e-12;
    const Eigen::MatrixXd q = relaxed_ncut_embedding(a, 2, opts);
    const double mean = q.col(0).mean();
    CHECK((q.col(0).array() - mean).abs().maxCoeff() <= 1e-8 * std::abs(mean));
}

TEST_CASE("second eigenvector sign-splits two loosely joined cliques") {
    std::vector<Triplet> entries;
    const auto add = [&](index_t i, index_t j) {
        entries.push_back({i, j, 1.0});
        entries.push_back({j, i, 1.0});
    };
    for (index_t i = 0; i < 5; ++i)
        for (index_t j = i + 1; j < 5; ++j) add(i, j);
    for (index_t i = 5; i < 10; ++i)
        for (index_t j = i + 1; j < 10; ++j) add(i, j);
    add(0, 5); // weak bridge
    const CsrMatrix a = CsrMatrix::from_triplets(10, 10, std::move(entries));

    SvdOptions opts;
    opts.seed = 2;
    opts.tol = 1e-12;
    const Eigen::MatrixXd q = relaxed_ncut_embedding(a, 2, opts);
    // Dense oracle.
    const Eigen::MatrixXd ad = a.to_dense();
    const Eigen::VectorXd deg = ad.rowwise().sum();
    Eigen::VectorXd inv_sqrt = deg.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd ln =
        Eigen::MatrixXd::Identity(10, 10) -
        inv_sqrt.asDiagonal() * ad * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ln);
    Eigen::MatrixXd q_oracle(10, 2);
    q_oracle.col(0) = inv_sqrt.cwiseProduct(eig.eigenvectors().col(0));
    q_oracle.col(1) = inv_sqrt.cwiseProduct(eig.eigenvectors().col(1));
    CHECK(testing::max_principal_angle(q, q_oracle) <= 1e-6);

    for (index_t i = 0; i < 5; ++i)
        for (index_t j = 5; j < 10; ++j) CHECK(q(i, 1) * q(j, 1) < 0.0);
}

TEST_CASE("relaxed embedding on the induced adjacency spans the joint embedding") {
    const EdvwHypergraph h = testing::random_hypergraph(12, 9, 0.3, 11);
    const WalkOperators walk = build_walk(h, 0.5);
    const HypergraphLaplacians lap = laplacians(walk);
    const int k = 3;

    SvdOptions opts;
    opts.seed = 3;
    opts.tol = 1e-12;
    const Eigen::MatrixXd q = relaxed_ncut_embedding(lap.a, k, opts);
    const SpectralEmbedding emb = spectral_embedding(walk, k, false, opts);
    CHECK(testing::max_principal_angle(q, Eigen::MatrixXd(emb.u)) <= 1e-6);
}

} // TEST_SUITE
