#pragma once

#include "hcc/sparse.hpp"

#include <Eigen/Dense>

namespace hcc::kernels {

// Data-parallel inner loops used by the walk, SVD, and k-means stages.
//
// Every kernel comes in a _serial and an _omp flavor with identical
// floating-point behavior: parallel versions only split independent output
// elements across threads, each element is still accumulated in the same
// serial order. The unsuffixed entry points dispatch to OpenMP when the
// library was built with it. The serial flavor is the reference the tests
// and the benchmark compare against.

// y = A x
void spmv_serial(const CsrMatrix& a, const double* x, double* y);
void spmv_omp(const CsrMatrix& a, const double* x, double* y);
void spmv(const CsrMatrix& a, const double* x, double* y);

inline Eigen::VectorXd spmv(const CsrMatrix& a, const Eigen::VectorXd& x) {
    Eigen::VectorXd y(a.rows());
    spmv(a, x.data(), y.data());
    return y;
}

// Y = A X (X dense, one column per subspace direction)
void spmm_serial(const CsrMatrix& a, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);
void spmm_omp(const CsrMatrix& a, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);
void spmm(const CsrMatrix& a, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);

inline Eigen::MatrixXd spmm(const CsrMatrix& a, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd y(a.rows(), x.cols());
    spmm(a, x, y);
    return y;
}

// Nearest-centroid assignment: labels[i] = argmin_c ||x_i - c||^2 with ties
// broken toward the lowest centroid index; dist2[i] = attained minimum.
void assign_nearest_serial(const RowMatrixXd& x, const RowMatrixXd& centroids,
                           int* labels, double* dist2);
void assign_nearest_omp(const RowMatrixXd& x, const RowMatrixXd& centroids,
                        int* labels, double* dist2);
void assign_nearest(const RowMatrixXd& x, const RowMatrixXd& centroids,
                    int* labels, double* dist2);

// Unit-normalize every nonzero row of m in place; rows with norm below
// `floor` are left untouched and their indices returned.
std::vector<index_t> normalize_rows(RowMatrixXd& m, double floor = 1e-300);

bool openmp_enabled();

// Thread cap from the HCC_THREADS environment variable (applied by the CLI).
void apply_thread_cap_from_env();

} // namespace hcc::kernels
