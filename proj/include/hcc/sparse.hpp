#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hcc {

using index_t = std::int64_t;

// Dense row-major matrix for point sets and embeddings (rows = entities).
using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Triplet {
    index_t row;
    index_t col;
    double value;
};

// CSR (compressed sparse row) matrix. Immutable shape after construction;
// in-place value scaling is allowed so walk operators stay cheap to build.
class CsrMatrix {
  public:
    CsrMatrix() = default;

    // Sorts by (row, col), sums duplicates, drops exact zeros.
    static CsrMatrix from_triplets(index_t n_rows, index_t n_cols,
                                   std::vector<Triplet> entries);

    static CsrMatrix identity(index_t n);

    index_t rows() const { return n_rows_; }
    index_t cols() const { return n_cols_; }
    index_t nnz() const { return static_cast<index_t>(col_idx_.size()); }

    std::span<const index_t> row_indices(index_t row) const {
        return {col_idx_.data() + row_ptr_[row],
                static_cast<std::size_t>(row_ptr_[row + 1] - row_ptr_[row])};
    }
    std::span<const double> row_values(index_t row) const {
        return {values_.data() + row_ptr_[row],
                static_cast<std::size_t>(row_ptr_[row + 1] - row_ptr_[row])};
    }
    std::span<double> row_values_mut(index_t row) {
        return {values_.data() + row_ptr_[row],
                static_cast<std::size_t>(row_ptr_[row + 1] - row_ptr_[row])};
    }

    const std::vector<index_t>& row_ptr() const { return row_ptr_; }
    const std::vector<index_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values_mut() { return values_; }

    CsrMatrix transposed() const;

    Eigen::VectorXd row_sums() const;

    // values[i,j] *= s[i]  /  values[i,j] *= s[j]
    void scale_rows(const Eigen::VectorXd& s);
    void scale_cols(const Eigen::VectorXd& s);

    // Lookup with binary search over the row; 0 for absent entries.
    double coeff(index_t row, index_t col) const;

    bool same_pattern(const CsrMatrix& other) const {
        return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ &&
               row_ptr_ == other.row_ptr_ && col_idx_ == other.col_idx_;
    }

    std::vector<Triplet> to_triplets() const;

    Eigen::MatrixXd to_dense() const;

  private:
    index_t n_rows_ = 0;
    index_t n_cols_ = 0;
    std::vector<index_t> row_ptr_{0};
    std::vector<index_t> col_idx_;
    std::vector<double> values_;
};

// a*X + b*Y entrywise over CSR matrices with merged patterns.
CsrMatrix csr_add(double a, const CsrMatrix& x, double b, const CsrMatrix& y);

// Matrix Market coordinate I/O ("real" or "integer" field, "general"
// symmetry). Values are written with max_digits10 precision so a
// write/read round trip reproduces doubles bit-exactly.
CsrMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const CsrMatrix& m);

} // namespace hcc
