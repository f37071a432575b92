#include "hcc/sparse.hpp"

#include "hcc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hcc {

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

CsrMatrix CsrMatrix::from_triplets(index_t n_rows, index_t n_cols,
                                   std::vector<Triplet> entries) {
    if (n_rows < 0 || n_cols < 0)
        throw InvalidArgument("negative matrix dimension");
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
            throw InvalidArgument("triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix m;
    m.n_rows_ = n_rows;
    m.n_cols_ = n_cols;
    m.row_ptr_.assign(static_cast<std::size_t>(n_rows) + 1, 0);
    m.col_idx_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t i = 0;
    while (i < entries.size()) {
        const index_t r = entries[i].row;
        const index_t c = entries[i].col;
        double v = entries[i].value;
        ++i;
        while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
            v += entries[i].value;
            ++i;
        }
        if (v != 0.0) {
            m.col_idx_.push_back(c);
            m.values_.push_back(v);
            ++m.row_ptr_[static_cast<std::size_t>(r) + 1];
        }
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(n_rows); ++r)
        m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

CsrMatrix CsrMatrix::identity(index_t n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
}

CsrMatrix CsrMatrix::transposed() const {
    CsrMatrix t;
    t.n_rows_ = n_cols_;
    t.n_cols_ = n_rows_;
    t.row_ptr_.assign(static_cast<std::size_t>(n_cols_) + 1, 0);
    t.col_idx_.resize(col_idx_.size());
    t.values_.resize(values_.size());
    for (index_t c : col_idx_) ++t.row_ptr_[static_cast<std::size_t>(c) + 1];
    for (std::size_t c = 0; c < static_cast<std::size_t>(n_cols_); ++c)
        t.row_ptr_[c + 1] += t.row_ptr_[c];
    std::vector<index_t> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
    for (index_t r = 0; r < n_rows_; ++r) {
        for (index_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const index_t c = col_idx_[static_cast<std::size_t>(k)];
            const index_t dst = next[static_cast<std::size_t>(c)]++;
            t.col_idx_[static_cast<std::size_t>(dst)] = r;
            t.values_[static_cast<std::size_t>(dst)] = values_[static_cast<std::size_t>(k)];
        }
    }
    return t;
}

Eigen::VectorXd CsrMatrix::row_sums() const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n_rows_);
    for (index_t r = 0; r < n_rows_; ++r) {
        double acc = 0.0;
        for (index_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += values_[static_cast<std::size_t>(k)];
        s[r] = acc;
    }
    return s;
}

void CsrMatrix::scale_rows(const Eigen::VectorXd& s) {
    if (s.size() != n_rows_) throw LengthMismatch("scale_rows vector size");
    for (index_t r = 0; r < n_rows_; ++r)
        for (index_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            values_[static_cast<std::size_t>(k)] *= s[r];
}

void CsrMatrix::scale_cols(const Eigen::VectorXd& s) {
    if (s.size() != n_cols_) throw LengthMismatch("scale_cols vector size");
    for (std::size_t k = 0; k < col_idx_.size(); ++k)
        values_[k] *= s[col_idx_[k]];
}

double CsrMatrix::coeff(index_t row, index_t col) const {
    const auto cols = row_indices(row);
    const auto it = std::lower_bound(cols.begin(), cols.end(), col);
    if (it == cols.end() || *it != col) return 0.0;
    return values_[static_cast<std::size_t>(row_ptr_[row] + (it - cols.begin()))];
}

std::vector<Triplet> CsrMatrix::to_triplets() const {
    std::vector<Triplet> t;
    t.reserve(col_idx_.size());
    for (index_t r = 0; r < n_rows_; ++r)
        for (index_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            t.push_back({r, col_idx_[static_cast<std::size_t>(k)],
                         values_[static_cast<std::size_t>(k)]});
    return t;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_rows_, n_cols_);
    for (index_t r = 0; r < n_rows_; ++r)
        for (index_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            d(r, col_idx_[static_cast<std::size_t>(k)]) +=
                values_[static_cast<std::size_t>(k)];
    return d;
}

CsrMatrix csr_add(double a, const CsrMatrix& x, double b, const CsrMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw LengthMismatch("csr_add dimension mismatch");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(x.nnz() + y.nnz()));
    for (auto& e : x.to_triplets()) t.push_back({e.row, e.col, a * e.value});
    for (auto& e : y.to_triplets()) t.push_back({e.row, e.col, b * e.value});
    return CsrMatrix::from_triplets(x.rows(), x.cols(), std::move(t));
}

namespace {

bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

} // namespace

CsrMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOFailure("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IOFailure("empty file " + path);
    if (!starts_with(line, "%%MatrixMarket"))
        throw IOFailure("not a Matrix Market file: " + path);
    {
        std::istringstream hdr(line);
        std::string tag, object, format, field, symmetry;
        hdr >> tag >> object >> format >> field >> symmetry;
        if (object != "matrix" || format != "coordinate")
            throw IOFailure("unsupported Matrix Market header in " + path);
        if (field != "real" && field != "integer")
            throw IOFailure("unsupported Matrix Market field '" + field + "' in " + path);
        if (symmetry != "general")
            throw IOFailure("only 'general' symmetry supported in " + path);
    }
    do {
        if (!std::getline(in, line)) throw IOFailure("truncated file " + path);
    } while (!line.empty() && line[0] == '%');

    std::istringstream dims(line);
    index_t n_rows = 0, n_cols = 0, nnz = 0;
    if (!(dims >> n_rows >> n_cols >> nnz))
        throw IOFailure("bad size line in " + path);

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    for (index_t i = 0; i < nnz; ++i) {
        index_t r = 0, c = 0;
        double v = 0.0;
        if (!(in >> r >> c >> v)) throw IOFailure("truncated entries in " + path);
        entries.push_back({r - 1, c - 1, v}); // 1-based on disk
    }
    return CsrMatrix::from_triplets(n_rows, n_cols, std::move(entries));
}

void write_matrix_market(const std::string& path, const CsrMatrix& m) {
    std::ofstream out(path);
    if (!out) throw IOFailure("cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
    char buf[64];
    for (index_t r = 0; r < m.rows(); ++r) {
        const auto cols = m.row_indices(r);
        const auto vals = m.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", vals[k]);
            out << (r + 1) << " " << (cols[k] + 1) << " " << buf << "\n";
        }
    }
    if (!out) throw IOFailure("write failed for " + path);
}

} // namespace hcc
