#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tweetmine/errors.hpp"
#include "tweetmine/matrix.hpp"
#include "tweetmine/rng.hpp"

namespace tweetmine {

struct SvdResult {
    DenseMatrix left_vectors;            // n_rows × r, orthonormal columns
    std::vector<double> singular_values; // length r, non-increasing
    DenseMatrix right_vectors;           // r × n_cols, orthonormal rows
    std::size_t rank_requested = 0;
};

struct ReducedMatrix {
    DenseMatrix points;  // n_rows × r, row i = U[i,:] ⊙ σ

    std::size_t size() const { return points.rows(); }
    std::size_t dims() const { return points.cols(); }
};

namespace detail {

struct SparseOp {
    const SparseBinaryMatrix& a;
    std::size_t rows() const { return a.n_rows; }
    std::size_t cols() const { return a.n_cols; }
    void mul(const double* x, double* y) const { a.multiply(x, y); }
    void mul_t(const double* x, double* y) const { a.multiply_transposed(x, y); }
};

struct DenseOp {
    const DenseMatrix& a;
    std::size_t rows() const { return a.rows(); }
    std::size_t cols() const { return a.cols(); }
    void mul(const double* x, double* y) const {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double acc = 0.0;
            const double* row = a.row_ptr(i);
            for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
    }
    void mul_t(const double* x, double* y) const {
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double* row = a.row_ptr(i);
            for (std::size_t j = 0; j < a.cols(); ++j) y[j] += row[j] * x[i];
        }
    }
};

// Y (m×l) -> thin Q factor, column by column through Eigen's Householder QR.
inline Eigen::MatrixXd thin_q(const Eigen::MatrixXd& y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    Eigen::MatrixXd q = qr.householderQ() *
                        Eigen::MatrixXd::Identity(y.rows(), y.cols());
    return q;
}

// Randomized subspace iteration shared by the sparse and dense entry points.
template <typename Op>
SvdResult truncated_svd_impl(const Op& op, std::size_t r, std::uint64_t seed,
                             std::size_t max_iter, double tol) {
    const std::size_t m = op.rows();
    const std::size_t n = op.cols();
    const std::size_t limit = std::min(m, n);
    if (r < 1 || r > limit) throw RankTooLarge(r, limit);
    const std::size_t l = std::min(r + 10, limit);

    // seeded Gaussian test matrix, fixed row-major fill order
    Rng rng(seed);
    Eigen::MatrixXd omega(n, l);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < l; ++j)
            omega(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rng.gaussian();

    std::vector<double> xbuf(std::max(m, n)), ybuf(std::max(m, n));
    auto apply = [&](const Eigen::MatrixXd& in, bool transposed) {
        const std::size_t out_rows = transposed ? n : m;
        Eigen::MatrixXd out(out_rows, static_cast<std::size_t>(in.cols()));
        for (Eigen::Index c = 0; c < in.cols(); ++c) {
            for (Eigen::Index i = 0; i < in.rows(); ++i)
                xbuf[static_cast<std::size_t>(i)] = in(i, c);
            if (transposed)
                op.mul_t(xbuf.data(), ybuf.data());
            else
                op.mul(xbuf.data(), ybuf.data());
            for (std::size_t i = 0; i < out_rows; ++i)
                out(static_cast<Eigen::Index>(i), c) = ybuf[i];
        }
        return out;
    };

    Eigen::MatrixXd q = thin_q(apply(omega, false));  // m×l range basis

    Eigen::MatrixXd u_full, v_full;
    Eigen::VectorXd sigma;
    double worst = 0.0;
    bool converged = false;
    for (std::size_t iter = 0; iter <= max_iter; ++iter) {
        // B = Qᵀ A computed as (Aᵀ Q)ᵀ, then small dense SVD of B (l×n)
        Eigen::MatrixXd bt = apply(q, true);  // n×l
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(bt.transpose(),
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        u_full = q * svd.matrixU();  // m×min(l,n)
        sigma = svd.singularValues();
        v_full = svd.matrixV();      // n×min(l,n)

        // contract: ‖A·vᵢ − σᵢ·uᵢ‖ ≤ tol·σ₁ for every kept triplet
        const double thr = tol * (sigma.size() > 0 ? sigma(0) : 0.0);
        worst = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                xbuf[j] = v_full(static_cast<Eigen::Index>(j),
                                 static_cast<Eigen::Index>(i));
            op.mul(xbuf.data(), ybuf.data());
            double err2 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double d = ybuf[j] - sigma(static_cast<Eigen::Index>(i)) *
                                               u_full(static_cast<Eigen::Index>(j),
                                                      static_cast<Eigen::Index>(i));
                err2 += d * d;
            }
            worst = std::max(worst, std::sqrt(err2));
        }
        if (worst <= thr) {
            converged = true;
            break;
        }
        if (iter == max_iter) break;
        // one power iteration with re-orthonormalization on both sides
        Eigen::MatrixXd z = thin_q(apply(q, true));   // n×l
        q = thin_q(apply(z, false));                  // m×l
    }
    if (!converged) throw ConvergenceFailure(max_iter, worst);

    SvdResult res;
    res.rank_requested = r;
    res.left_vectors = DenseMatrix(m, r);
    res.right_vectors = DenseMatrix(r, n);
    res.singular_values.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        res.singular_values[i] = sigma(static_cast<Eigen::Index>(i));
        // sign convention: largest-|entry| component of uᵢ made positive
        // (first occurrence wins on ties)
        double best = -1.0;
        double sign = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double v = u_full(static_cast<Eigen::Index>(j),
                                    static_cast<Eigen::Index>(i));
            if (std::fabs(v) > best) {
                best = std::fabs(v);
                sign = v < 0 ? -1.0 : 1.0;
            }
        }
        for (std::size_t j = 0; j < m; ++j)
            res.left_vectors(j, i) = sign * u_full(static_cast<Eigen::Index>(j),
                                                   static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < n; ++j)
            res.right_vectors(i, j) = sign * v_full(static_cast<Eigen::Index>(j),
                                                    static_cast<Eigen::Index>(i));
    }
    return res;
}

} // namespace detail

inline SvdResult truncated_svd(const SparseBinaryMatrix& matrix, std::size_t r,
                               std::uint64_t seed, std::size_t max_iter = 300,
                               double tol = 1e-10) {
    return detail::truncated_svd_impl(detail::SparseOp{matrix}, r, seed, max_iter, tol);
}

inline SvdResult truncated_svd(const DenseMatrix& matrix, std::size_t r,
                               std::uint64_t seed, std::size_t max_iter = 300,
                               double tol = 1e-10) {
    return detail::truncated_svd_impl(detail::DenseOp{matrix}, r, seed, max_iter, tol);
}

inline ReducedMatrix reduce(const SvdResult& svd) {
    const std::size_t m = svd.left_vectors.rows();
    const std::size_t r = svd.left_vectors.cols();
    ReducedMatrix out;
    out.points = DenseMatrix(m, r);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < r; ++j)
            out.points(i, j) = svd.left_vectors(i, j) * svd.singular_values[j];
    return out;
}

inline void export_reduced(const ReducedMatrix& reduced, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    char buf[64];
    for (std::size_t i = 0; i < reduced.points.rows(); ++i) {
        for (std::size_t j = 0; j < reduced.points.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", reduced.points(i, j));
            if (j) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

} // namespace tweetmine
