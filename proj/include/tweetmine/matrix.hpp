#pragma once

#include <cstddef>
#include <vector>

#include "tweetmine/errors.hpp"

namespace tweetmine {

// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Binary incidence matrix in compressed sparse row form; values are
// implicitly 1.  Rows are features, columns are documents.
struct SparseBinaryMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::size_t> row_offsets;  // length n_rows+1
    std::vector<std::size_t> col_indices;  // length nnz, sorted within a row

    std::size_t nnz() const { return col_indices.size(); }

    std::size_t row_nnz(std::size_t i) const {
        return row_offsets[i + 1] - row_offsets[i];
    }

    // y = A x   (length n_rows)
    void multiply(const double* x, double* y) const {
        for (std::size_t i = 0; i < n_rows; ++i) {
            double acc = 0.0;
            for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
                acc += x[col_indices[p]];
            y[i] = acc;
        }
    }

    // y = A^T x  (length n_cols)
    void multiply_transposed(const double* x, double* y) const {
        for (std::size_t j = 0; j < n_cols; ++j) y[j] = 0.0;
        for (std::size_t i = 0; i < n_rows; ++i)
            for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
                y[col_indices[p]] += x[i];
    }

    DenseMatrix densify() const {
        DenseMatrix d(n_rows, n_cols);
        for (std::size_t i = 0; i < n_rows; ++i)
            for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
                d(i, col_indices[p]) = 1.0;
        return d;
    }

    static SparseBinaryMatrix from_dense(const DenseMatrix& d) {
        SparseBinaryMatrix m;
        m.n_rows = d.rows();
        m.n_cols = d.cols();
        m.row_offsets.reserve(d.rows() + 1);
        m.row_offsets.push_back(0);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            for (std::size_t j = 0; j < d.cols(); ++j)
                if (d(i, j) != 0.0) m.col_indices.push_back(j);
            m.row_offsets.push_back(m.col_indices.size());
        }
        return m;
    }

    void validate() const {
        if (row_offsets.size() != n_rows + 1)
            throw InternalError("sparse matrix: bad row_offsets length");
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (row_offsets[i] > row_offsets[i + 1])
                throw InternalError("sparse matrix: decreasing row_offsets");
            for (std::size_t p = row_offsets[i]; p + 1 < row_offsets[i + 1]; ++p)
                if (col_indices[p] >= col_indices[p + 1])
                    throw InternalError("sparse matrix: unsorted row");
        }
        if (row_offsets.back() != col_indices.size())
            throw InternalError("sparse matrix: nnz mismatch");
        for (std::size_t c : col_indices)
            if (c >= n_cols) throw InternalError("sparse matrix: column out of range");
    }
};

} // namespace tweetmine
