#include "hcc/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hcc::kernels {

namespace {

inline double row_dot(const CsrMatrix& a, index_t r, const double* x) {
    const auto cols = a.row_indices(r);
    const auto vals = a.row_values(r);
    double acc = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) acc += vals[k] * x[cols[k]];
    return acc;
}

inline void assign_row(const RowMatrixXd& x, const RowMatrixXd& c, index_t i,
                       int* labels, double* dist2) {
    const index_t k = c.rows();
    const index_t d = c.cols();
    const double* xi = x.data() + i * d;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (index_t j = 0; j < k; ++j) {
        const double* cj = c.data() + j * d;
        double acc = 0.0;
        for (index_t t = 0; t < d; ++t) {
            const double diff = xi[t] - cj[t];
            acc += diff * diff;
        }
        if (acc < best_d) {
            best_d = acc;
            best = static_cast<int>(j);
        }
    }
    labels[i] = best;
    dist2[i] = best_d;
}

} // namespace

void spmv_serial(const CsrMatrix& a, const double* x, double* y) {
    for (index_t r = 0; r < a.rows(); ++r) y[r] = row_dot(a, r, x);
}

void spmv_omp(const CsrMatrix& a, const double* x, double* y) {
    const index_t n = a.rows();
#pragma omp parallel for schedule(static)
    for (index_t r = 0; r < n; ++r) y[r] = row_dot(a, r, x);
}

void spmv(const CsrMatrix& a, const double* x, double* y) {
#ifdef _OPENMP
    spmv_omp(a, x, y);
#else
    spmv_serial(a, x, y);
#endif
}

namespace {

inline void spmm_row(const CsrMatrix& a, const Eigen::MatrixXd& x,
                     Eigen::MatrixXd& y, index_t r) {
    const auto cols = a.row_indices(r);
    const auto vals = a.row_values(r);
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k)
            acc += vals[k] * x(cols[k], c);
        y(r, c) = acc;
    }
}

} // namespace

void spmm_serial(const CsrMatrix& a, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    y.resize(a.rows(), x.cols());
    for (index_t r = 0; r < a.rows(); ++r) spmm_row(a, x, y, r);
}

void spmm_omp(const CsrMatrix& a, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    y.resize(a.rows(), x.cols());
    const index_t n = a.rows();
#pragma omp parallel for schedule(static)
    for (index_t r = 0; r < n; ++r) spmm_row(a, x, y, r);
}

void spmm(const CsrMatrix& a, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
#ifdef _OPENMP
    spmm_omp(a, x, y);
#else
    spmm_serial(a, x, y);
#endif
}

void assign_nearest_serial(const RowMatrixXd& x, const RowMatrixXd& centroids,
                           int* labels, double* dist2) {
    for (index_t i = 0; i < x.rows(); ++i) assign_row(x, centroids, i, labels, dist2);
}

void assign_nearest_omp(const RowMatrixXd& x, const RowMatrixXd& centroids,
                        int* labels, double* dist2) {
    const index_t n = x.rows();
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i) assign_row(x, centroids, i, labels, dist2);
}

void assign_nearest(const RowMatrixXd& x, const RowMatrixXd& centroids,
                    int* labels, double* dist2) {
#ifdef _OPENMP
    assign_nearest_omp(x, centroids, labels, dist2);
#else
    assign_nearest_serial(x, centroids, labels, dist2);
#endif
}

std::vector<index_t> normalize_rows(RowMatrixXd& m, double floor) {
    std::vector<index_t> skipped;
    const index_t n = m.rows();
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i) {
        const double norm = m.row(i).norm();
        if (norm >= floor) m.row(i) /= norm;
    }
    for (index_t i = 0; i < n; ++i)
        if (m.row(i).norm() < floor) skipped.push_back(i);
    return skipped;
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

void apply_thread_cap_from_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("HCC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

} // namespace hcc::kernels
