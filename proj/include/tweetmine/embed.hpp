#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "tweetmine/decompose.hpp"
#include "tweetmine/errors.hpp"
#include "tweetmine/matrix.hpp"
#include "tweetmine/rng.hpp"

namespace tweetmine {

struct TsneConfig {
    double perplexity = 30.0;
    double learning_rate = 200.0;
    std::size_t n_iter = 1000;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iters = 250;
    double momentum_early = 0.5;
    double momentum_late = 0.8;
    std::uint64_t seed = 0;
};

struct Embedding2D {
    DenseMatrix coords;            // n_points × 2
    double final_kl = 0.0;
    std::vector<double> kl_trace;  // recorded every 50 iterations (plain P)
};

namespace detail {

constexpr double kQFloor = 1e-12;

inline DenseMatrix squared_distances(const DenseMatrix& pts) {
    const std::size_t n = pts.rows();
    const std::size_t d = pts.cols();
    DenseMatrix d2(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = sq_dist(pts.row_ptr(i), pts.row_ptr(j), d);
            d2(i, j) = dist;
            d2(j, i) = dist;
        }
    return d2;
}

} // namespace detail

// Row-stochastic conditional affinities P(j|i): per-point Gaussian bandwidths
// found by bisection so each row's perplexity 2^H hits the target within 1e-4
// (at most 64 steps).
inline DenseMatrix conditional_affinities(const ReducedMatrix& points,
                                          double perplexity) {
    const DenseMatrix& pts = points.points;
    const std::size_t n = pts.rows();
    if (n < 4) throw InvalidConfig("t-SNE needs at least 4 points");
    if (!(perplexity > 0.0) || perplexity >= static_cast<double>(n))
        throw InvalidConfig("perplexity must be in (0, n_points)");

    const DenseMatrix d2 = detail::squared_distances(pts);
    DenseMatrix cond(n, n);  // row i: P(j|i)
    std::vector<double> probs(n);

    for (std::size_t i = 0; i < n; ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dmin = std::min(dmin, d2(i, j));

        double beta = 1.0;
        double beta_lo = -std::numeric_limits<double>::infinity();
        double beta_hi = std::numeric_limits<double>::infinity();
        bool found = false;
        for (int step = 0; step < 64; ++step) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                probs[j] = (j == i) ? 0.0 : std::exp(-beta * (d2(i, j) - dmin));
                sum += probs[j];
            }
            double entropy_bits = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                probs[j] /= sum;
                if (probs[j] > 0.0) entropy_bits -= probs[j] * std::log2(probs[j]);
            }
            const double perp = std::exp2(entropy_bits);
            if (std::fabs(perp - perplexity) <= 1e-4) {
                found = true;
                break;
            }
            if (perp > perplexity) {  // distribution too flat: sharpen
                beta_lo = beta;
                beta = std::isinf(beta_hi) ? beta * 2.0 : 0.5 * (beta + beta_hi);
            } else {
                beta_hi = beta;
                beta = std::isinf(beta_lo) ? beta * 0.5 : 0.5 * (beta + beta_lo);
            }
        }
        if (!found) throw BandwidthSearchFailure(i);
        for (std::size_t j = 0; j < n; ++j) cond(i, j) = probs[j];
    }
    return cond;
}

// Symmetrized joint affinities (P(j|i)+P(i|j))/(2n); the whole matrix sums to 1.
inline DenseMatrix pairwise_affinities(const ReducedMatrix& points,
                                       double perplexity) {
    const DenseMatrix cond = conditional_affinities(points, perplexity);
    const std::size_t n = cond.rows();
    DenseMatrix p(n, n);
    const double inv = 1.0 / (2.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) = (cond(i, j) + cond(j, i)) * inv;
    return p;
}

// Student-t (1 dof) affinities of a 2-D configuration, normalized to sum 1.
inline DenseMatrix low_dim_affinities(const DenseMatrix& y) {
    const std::size_t n = y.rows();
    DenseMatrix q(n, n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = 1.0 / (1.0 + detail::sq_dist(y.row_ptr(i), y.row_ptr(j), 2));
            q(i, j) = w;
            q(j, i) = w;
            z += 2.0 * w;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) q(i, j) /= z;
    return q;
}

// KL(P ‖ Q) in nats with the q floor guarding coincident points.
inline double kl_divergence(const DenseMatrix& p, const DenseMatrix& y) {
    const DenseMatrix q = low_dim_affinities(y);
    const std::size_t n = p.rows();
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || p(i, j) <= 0.0) continue;
            kl += p(i, j) * std::log(p(i, j) / std::max(q(i, j), detail::kQFloor));
        }
    return kl;
}

// dC/dy_i = 4 Σ_j (p_ij − q_ij) w_ij (y_i − y_j), w_ij = 1/(1+‖y_i−y_j‖²)
inline DenseMatrix kl_gradient(const DenseMatrix& p, const DenseMatrix& y) {
    const std::size_t n = y.rows();
    DenseMatrix w(n, n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double wij =
                1.0 / (1.0 + detail::sq_dist(y.row_ptr(i), y.row_ptr(j), 2));
            w(i, j) = wij;
            w(j, i) = wij;
            z += 2.0 * wij;
        }
    DenseMatrix grad(n, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double mult = 4.0 * (p(i, j) - w(i, j) / z) * w(i, j);
            const double dx = y(i, 0) - y(j, 0);
            const double dy = y(i, 1) - y(j, 1);
            grad(i, 0) += mult * dx;
            grad(i, 1) += mult * dy;
            grad(j, 0) -= mult * dx;
            grad(j, 1) -= mult * dy;
        }
    return grad;
}

inline Embedding2D tsne(const ReducedMatrix& points, const TsneConfig& config) {
    if (config.early_exaggeration < 1.0)
        throw InvalidConfig("early_exaggeration must be >= 1");
    if (config.exaggeration_iters > config.n_iter)
        throw InvalidConfig("exaggeration_iters must be <= n_iter");
    if (!(config.learning_rate > 0.0))
        throw InvalidConfig("learning_rate must be positive");
    if (config.momentum_early < 0.0 || config.momentum_early >= 1.0 ||
        config.momentum_late < 0.0 || config.momentum_late >= 1.0)
        throw InvalidConfig("momenta must lie in [0,1)");

    const DenseMatrix p = pairwise_affinities(points, config.perplexity);
    const std::size_t n = p.rows();

    Rng rng(config.seed);
    Embedding2D emb;
    emb.coords = DenseMatrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        emb.coords(i, 0) = rng.gaussian() * 1e-4;
        emb.coords(i, 1) = rng.gaussian() * 1e-4;
    }

    if (config.n_iter == 0) {
        emb.final_kl = kl_divergence(p, emb.coords);
        emb.kl_trace.push_back(emb.final_kl);
        return emb;
    }

    DenseMatrix velocity(n, 2);
    DenseMatrix exag_p(n, n);
    for (std::size_t iter = 0; iter < config.n_iter; ++iter) {
        if (iter % 50 == 0)
            emb.kl_trace.push_back(kl_divergence(p, emb.coords));

        const bool exaggerating = iter < config.exaggeration_iters;
        const double momentum =
            exaggerating ? config.momentum_early : config.momentum_late;
        const DenseMatrix* p_eff = &p;
        if (exaggerating && config.early_exaggeration != 1.0) {
            for (std::size_t i = 0; i < n * n; ++i)
                exag_p.data()[i] = p.data()[i] * config.early_exaggeration;
            p_eff = &exag_p;
        }

        const DenseMatrix grad = kl_gradient(*p_eff, emb.coords);
        double mean_x = 0.0, mean_y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            velocity(i, 0) = momentum * velocity(i, 0) - config.learning_rate * grad(i, 0);
            velocity(i, 1) = momentum * velocity(i, 1) - config.learning_rate * grad(i, 1);
            emb.coords(i, 0) += velocity(i, 0);
            emb.coords(i, 1) += velocity(i, 1);
            mean_x += emb.coords(i, 0);
            mean_y += emb.coords(i, 1);
        }
        mean_x /= static_cast<double>(n);
        mean_y /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            emb.coords(i, 0) -= mean_x;
            emb.coords(i, 1) -= mean_y;
            if (!std::isfinite(emb.coords(i, 0)) || !std::isfinite(emb.coords(i, 1)))
                throw NumericalOverflow(iter);
        }
    }
    emb.final_kl = kl_divergence(p, emb.coords);
    return emb;
}

inline void export_embedding(const std::vector<std::string>& surfaces,
                             const Embedding2D& emb, const std::string& path) {
    if (surfaces.size() != emb.coords.rows())
        throw SizeMismatch(surfaces.size(), emb.coords.rows());
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    char bx[64], by[64];
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        std::snprintf(bx, sizeof(bx), "%.17g", emb.coords(i, 0));
        std::snprintf(by, sizeof(by), "%.17g", emb.coords(i, 1));
        out << surfaces[i] << '\t' << bx << '\t' << by << '\n';
    }
}

} // namespace tweetmine
