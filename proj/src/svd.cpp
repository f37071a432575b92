#include "hcc/svd.hpp"

#include "hcc/errors.hpp"
#include "hcc/kernels.hpp"
#include "hcc/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace hcc {

namespace {

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

// Largest residual over the first k triplets.
double max_residual(const CsrMatrix& a, const CsrMatrix& at,
                    const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                    const Eigen::VectorXd& sigma, int k) {
    const Eigen::MatrixXd av = kernels::spmm(a, v.leftCols(k));
    const Eigen::MatrixXd atu = kernels::spmm(at, u.leftCols(k));
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
        const double rv = (av.col(i) - sigma[i] * u.col(i)).norm();
        const double ru = (atu.col(i) - sigma[i] * v.col(i)).norm();
        worst = std::max(worst, std::max(rv, ru));
    }
    return worst;
}

void fix_signs(Eigen::MatrixXd& u, Eigen::MatrixXd& v) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index imax = 0;
        u.col(j).cwiseAbs().maxCoeff(&imax);
        if (u(imax, j) < 0.0) {
            u.col(j) = -u.col(j);
            v.col(j) = -v.col(j);
        }
    }
}

SvdResult take_top_k(const Eigen::MatrixXd& u_full, const Eigen::VectorXd& s_full,
                     const Eigen::MatrixXd& v_full, int k, int iterations) {
    SvdResult r;
    r.u = u_full.leftCols(k);
    r.v = v_full.leftCols(k);
    r.sigma = s_full.head(k);
    r.sigma_next = s_full.size() > k ? s_full[k]
                                     : std::numeric_limits<double>::quiet_NaN();
    r.iterations = iterations;
    fix_signs(r.u, r.v);
    return r;
}

SvdResult svd_dense(const CsrMatrix& a, int k) {
    if (a.rows() * a.cols() > index_t{25'000'000})
        throw InvalidArgument("dense SVD backend refused for " +
                              std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) +
                              "; use randomized or lanczos");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a.to_dense(),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    return take_top_k(svd.matrixU(), svd.singularValues(), svd.matrixV(), k, 1);
}

SvdResult svd_randomized(const CsrMatrix& a, const CsrMatrix& at, int k,
                         const SvdOptions& opts) {
    const index_t m = a.rows();
    const index_t n = a.cols();
    const index_t ell = std::min<index_t>(k + std::max(opts.oversample, 1),
                                          std::min(m, n));

    Rng rng = make_rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd omega(n, ell);
    for (index_t j = 0; j < ell; ++j)
        for (index_t i = 0; i < n; ++i) omega(i, j) = gauss(rng);

    Eigen::MatrixXd q = thin_q(kernels::spmm(a, omega));

    for (int it = 1; it <= opts.max_iter; ++it) {
        const Eigen::MatrixXd z = thin_q(kernels::spmm(at, q));
        q = thin_q(kernels::spmm(a, z));
        if (it < opts.min_power_iters && ell < std::min(m, n)) continue;

        // Rayleigh-Ritz on the current subspace: A ~ Q (Q^T A).
        const Eigen::MatrixXd bt = kernels::spmm(at, q); // n x ell
        Eigen::BDCSVD<Eigen::MatrixXd> small(bt, Eigen::ComputeThinU |
                                                     Eigen::ComputeThinV);
        const Eigen::MatrixXd u = q * small.matrixV();
        const Eigen::MatrixXd& v = small.matrixU();
        const Eigen::VectorXd& s = small.singularValues();
        if (max_residual(a, at, u, v, s, k) <= opts.tol)
            return take_top_k(u, s, v, k, it);
    }
    throw NoConvergence("randomized SVD: residual above " +
                        std::to_string(opts.tol) + " after " +
                        std::to_string(opts.max_iter) + " subspace iterations");
}

// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
SvdResult svd_lanczos(const CsrMatrix& a, const CsrMatrix& at, int k,
                      const SvdOptions& opts) {
    const index_t m = a.rows();
    const index_t n = a.cols();
    const index_t max_steps =
        std::min<index_t>(std::min(m, n), std::max(opts.max_iter, k + 2));

    Rng rng = make_rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd vs(n, max_steps); // right Lanczos vectors
    Eigen::MatrixXd us(m, max_steps); // left Lanczos vectors
    Eigen::VectorXd alphas(max_steps);
    Eigen::VectorXd betas(max_steps); // betas[j] couples step j to j+1

    Eigen::VectorXd v(n);
    for (index_t i = 0; i < n; ++i) v[i] = gauss(rng);
    v.normalize();
    vs.col(0) = v;

    const auto reorth = [](const Eigen::MatrixXd& basis, index_t count,
                           Eigen::VectorXd& x) {
        for (int pass = 0; pass < 2; ++pass)
            for (index_t j = 0; j < count; ++j)
                x -= basis.col(j).dot(x) * basis.col(j);
    };

    index_t steps = 0;
    Eigen::VectorXd u(m);
    for (index_t j = 0; j < max_steps; ++j) {
        u = kernels::spmv(a, Eigen::VectorXd(vs.col(j)));
        if (j > 0) u -= betas[j - 1] * us.col(j - 1);
        reorth(us, j, u);
        alphas[j] = u.norm();
        if (alphas[j] < 1e-14) {
            // Invariant subspace hit from the left; restart direction.
            for (index_t i = 0; i < m; ++i) u[i] = gauss(rng);
            reorth(us, j, u);
            alphas[j] = 0.0;
            const double norm = u.norm();
            if (norm < 1e-14) { steps = j; break; }
            u /= norm;
        } else {
            u /= alphas[j];
        }
        us.col(j) = u;
        steps = j + 1;

        Eigen::VectorXd w = kernels::spmv(at, u) - alphas[j] * vs.col(j);
        reorth(vs, j + 1, w);
        betas[j] = w.norm();
        const bool exhausted = (j + 1 == max_steps);
        if (!exhausted) {
            if (betas[j] < 1e-14) {
                for (index_t i = 0; i < n; ++i) w[i] = gauss(rng);
                reorth(vs, j + 1, w);
                betas[j] = 0.0;
                const double norm = w.norm();
                if (norm < 1e-14) break;
                vs.col(j + 1) = w / norm;
            } else {
                vs.col(j + 1) = w / betas[j];
            }
        }

        const bool enough = steps >= std::min<index_t>(k + 2, std::min(m, n));
        const bool check_now = enough && (steps % 4 == 0 || exhausted ||
                                          steps == std::min(m, n));
        if (!check_now) continue;

        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(steps, steps);
        for (index_t i = 0; i < steps; ++i) {
            b(i, i) = alphas[i];
            if (i + 1 < steps) b(i, i + 1) = betas[i];
        }
        Eigen::BDCSVD<Eigen::MatrixXd> small(b, Eigen::ComputeThinU |
                                                    Eigen::ComputeThinV);
        const int avail = static_cast<int>(steps);
        if (avail < k) continue;
        const Eigen::MatrixXd ru = us.leftCols(steps) * small.matrixU();
        const Eigen::MatrixXd rv = vs.leftCols(steps) * small.matrixV();
        const Eigen::VectorXd& s = small.singularValues();
        if (max_residual(a, at, ru, rv, s, k) <= opts.tol ||
            steps == std::min(m, n))
            return take_top_k(ru, s, rv, k, static_cast<int>(steps));
    }
    throw NoConvergence("lanczos SVD: residual above " + std::to_string(opts.tol) +
                        " after " + std::to_string(steps) + " steps");
}

} // namespace

SvdResult svd_top_k(const CsrMatrix& a, const CsrMatrix& at, int k,
                    const SvdOptions& opts) {
    if (at.rows() != a.cols() || at.cols() != a.rows())
        throw LengthMismatch("svd_top_k: `at` is not the transpose of `a`");
    const index_t min_dim = std::min(a.rows(), a.cols());
    if (k < 1 || k > min_dim)
        throw KTooLarge("k = " + std::to_string(k) + " outside [1, " +
                        std::to_string(min_dim) + "]");
    switch (opts.backend) {
        case SvdBackend::dense: return svd_dense(a, k);
        case SvdBackend::lanczos: return svd_lanczos(a, at, k, opts);
        case SvdBackend::randomized: break;
    }
    return svd_randomized(a, at, k, opts);
}

} // namespace hcc
