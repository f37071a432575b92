#include "hcc/walk.hpp"

#include "hcc/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace hcc;

namespace {

EdvwHypergraph three_vertex_example() {
    const CsrMatrix r = CsrMatrix::from_triplets(
        2, 3, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}, {1, 2, 4.0}});
    return build_hypergraph(r, (Eigen::VectorXd(2) << 5.0, 6.0).finished());
}

} // namespace

TEST_SUITE("walk") {

TEST_CASE("vertex->hyperedge transitions proportional to hyperedge weight") {
    // One vertex in both hyperedges, omega = (3, 1).
    const CsrMatrix r =
        CsrMatrix::from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, 2.0}});
    const EdvwHypergraph h =
        build_hypergraph(r, (Eigen::VectorXd(2) << 3.0, 1.0).finished());
    const auto [p_ve, p_ev] = transition_matrices(h);
    CHECK(p_ve.coeff(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(p_ve.coeff(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("hyperedge->vertex transitions proportional to vertex weight") {
    const CsrMatrix r = CsrMatrix::from_triplets(1, 2, {{0, 0, 2.0}, {0, 1, 2.0}});
    const EdvwHypergraph h = build_hypergraph(r, Eigen::VectorXd::Ones(1));
    const auto [p_ve, p_ev] = transition_matrices(h);
    CHECK(p_ev.coeff(0, 0) == 0.5);
    CHECK(p_ev.coeff(0, 1) == 0.5);
}

TEST_CASE("rows of both transition matrices sum to one") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const EdvwHypergraph h = testing::random_hypergraph(12, 9, 0.3, seed);
        const auto [p_ve, p_ev] = transition_matrices(h);
        for (const auto& m : {p_ve, p_ev}) {
            const Eigen::VectorXd sums = m.row_sums();
            for (index_t i = 0; i < sums.size(); ++i)
                CHECK(sums[i] == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("block transition places the blocks and stays stochastic") {
    const EdvwHypergraph h = three_vertex_example();
    const auto [p_ve, p_ev] = transition_matrices(h);
    const CsrMatrix p = block_transition(p_ve, p_ev);
    const index_t nv = h.n_vertices;
    for (const auto& t : p_ve.to_triplets())
        CHECK(p.coeff(t.row, nv + t.col) == t.value);
    for (const auto& t : p_ev.to_triplets())
        CHECK(p.coeff(nv + t.row, t.col) == t.value);
    const Eigen::VectorXd sums = p.row_sums();
    for (index_t i = 0; i < sums.size(); ++i)
        CHECK(sums[i] == doctest::Approx(1.0).epsilon(1e-12));

    // Bipartite periodicity: P^2 has empty off-diagonal blocks.
    const Eigen::MatrixXd p2 = p.to_dense() * p.to_dense();
    CHECK(p2.block(0, nv, nv, h.n_hyperedges).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p2.block(nv, 0, h.n_hyperedges, nv).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lazy walk mixes identity and chain") {
    const CsrMatrix p =
        CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
    const CsrMatrix pa = lazy_walk(p, 0.5);
    CHECK(pa.coeff(0, 0) == 0.5);
    CHECK(pa.coeff(0, 1) == 0.5);
    const Eigen::VectorXd sums = pa.row_sums();
    CHECK(sums[0] == 1.0);
    CHECK(sums[1] == 1.0);

    CHECK_THROWS_AS(lazy_walk(p, 0.0), AlphaOutOfRange);
    CHECK_THROWS_AS(lazy_walk(p, 1.0), AlphaOutOfRange);
}

TEST_CASE("lazy walk on a connected hypergraph is primitive") {
    const EdvwHypergraph h = three_vertex_example();
    const auto [p_ve, p_ev] = transition_matrices(h);
    const CsrMatrix pa = lazy_walk(block_transition(p_ve, p_ev), 0.5);
    Eigen::MatrixXd power = pa.to_dense();
    for (int step = 0; step < 3; ++step) power *= pa.to_dense();
    CHECK(power.minCoeff() > 0.0); // P_alpha^4 strictly positive
}

TEST_CASE("stationary distribution of the symmetric toy chain") {
    // 2 vertices, 1 hyperedge, uniform weights: pi = (1/4, 1/4, 1/2).
    const CsrMatrix r = CsrMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
    const EdvwHypergraph h =
        build_hypergraph(r, (Eigen::VectorXd(1) << 7.0).finished());
    const auto [p_ve, p_ev] = transition_matrices(h);
    const Eigen::VectorXd pi = stationary_distribution(p_ve, p_ev);
    CHECK(pi[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pi[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stationary distribution invariants on random instances") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const EdvwHypergraph h = testing::random_hypergraph(14, 10, 0.25, seed);
        const auto [p_ve, p_ev] = transition_matrices(h);
        const Eigen::VectorXd pi = stationary_distribution(p_ve, p_ev);
        const index_t nv = h.n_vertices;

        CHECK(pi.minCoeff() > 0.0);
        CHECK(pi.lpNorm<1>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(pi.head(nv).sum() == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(pi.tail(h.n_hyperedges).sum() == doctest::Approx(0.5).epsilon(1e-10));

        // pi^T P_alpha = pi^T for several alphas on the same pi.
        for (double alpha : {0.1, 0.5, 0.9}) {
            const CsrMatrix pa = lazy_walk(block_transition(p_ve, p_ev), alpha);
            const Eigen::VectorXd residual =
                pa.to_dense().transpose() * pi - pi;
            CHECK(residual.lpNorm<1>() <= 1e-10);
        }
    }
}

TEST_CASE("power iteration agrees with the exact solve, alpha-independently") {
    const EdvwHypergraph h = testing::random_hypergraph(11, 8, 0.3, 3);
    const auto [p_ve, p_ev] = transition_matrices(h);
    const Eigen::VectorXd pi = stationary_distribution(p_ve, p_ev);
    const Eigen::VectorXd exact_03 = stationary_exact(p_ve, p_ev, 0.3);
    const Eigen::VectorXd exact_07 = stationary_exact(p_ve, p_ev, 0.7);
    CHECK((exact_03 - exact_07).lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK((pi - exact_03).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("stationary iteration reports non-convergence") {
    const EdvwHypergraph h = testing::random_hypergraph(10, 8, 0.3, 5);
    const auto [p_ve, p_ev] = transition_matrices(h);
    StationaryOptions opts;
    opts.max_iter = 1;
    opts.tol = 1e-15;
    CHECK_THROWS_AS(stationary_distribution(p_ve, p_ev, opts), NoConvergence);
}

TEST_CASE("laplacian identities") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        const EdvwHypergraph h = three_vertex_example();
        const WalkOperators walk = build_walk(h, alpha);
        const HypergraphLaplacians lap = laplacians(walk);
        const index_t n = h.n_vertices + h.n_hyperedges;

        const Eigen::MatrixXd a = lap.a.to_dense();
        const Eigen::MatrixXd l = lap.l.to_dense();
        const Eigen::MatrixXd ln = lap.l_norm.to_dense();

        CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a * Eigen::VectorXd::Ones(n) - walk.pi).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((l * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() <= 1e-10);

        // L = diag(pi) - A entry for entry.
        Eigen::MatrixXd expected_l = -a;
        for (index_t i = 0; i < n; ++i) expected_l(i, i) += walk.pi[i];
        CHECK((l - expected_l).cwiseAbs().maxCoeff() <= 1e-15);

        // Normalized form computed the other way.
        Eigen::VectorXd inv_sqrt(n);
        for (index_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(walk.pi[i]);
        const Eigen::MatrixXd ln_oracle =
            inv_sqrt.asDiagonal() * l * inv_sqrt.asDiagonal();
        CHECK((ln - ln_oracle).cwiseAbs().maxCoeff() <= 1e-12);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ln);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
        CHECK(eig.eigenvalues().minCoeff() <= 1e-10);
        CHECK(eig.eigenvalues().maxCoeff() <= 2.0 * alpha + 1e-8);

        // Eigenvector for eigenvalue 0 is sqrt(pi) (up to sign).
        Eigen::VectorXd ground = walk.pi.cwiseSqrt().normalized();
        Eigen::VectorXd first = eig.eigenvectors().col(0);
        if (first.dot(ground) < 0) first = -first;
        CHECK((first - ground).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("pi is independent of the device alpha used inside the iteration") {
    const EdvwHypergraph h = testing::random_hypergraph(13, 9, 0.3, 8);
    const auto [p_ve, p_ev] = transition_matrices(h);
    StationaryOptions a, b;
    a.device_alpha = 0.3;
    b.device_alpha = 0.7;
    const Eigen::VectorXd pi_a = stationary_distribution(p_ve, p_ev, a);
    const Eigen::VectorXd pi_b = stationary_distribution(p_ve, p_ev, b);
    CHECK((pi_a - pi_b).lpNorm<Eigen::Infinity>() <= 1e-9);
}

} // TEST_SUITE
