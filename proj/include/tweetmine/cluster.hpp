#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "tweetmine/decompose.hpp"
#include "tweetmine/errors.hpp"
#include "tweetmine/matrix.hpp"
#include "tweetmine/rng.hpp"

namespace tweetmine {

struct ClusterModel {
    std::size_t k = 0;
    DenseMatrix centroids;                 // k × r
    std::vector<std::size_t> assignments;  // one per point, in [0,k)
    double inertia = 0.0;
    std::size_t iterations_run = 0;
    std::vector<double> inertia_trace;     // one entry per assignment pass
};

namespace detail {

inline double sq_dist(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

// nearest centroid per point (ties -> lowest cluster id) and total inertia
inline double assign_points(const DenseMatrix& pts, const DenseMatrix& centroids,
                            std::vector<std::size_t>& assignments) {
    const std::size_t n = pts.rows();
    const std::size_t d = pts.cols();
    const std::size_t k = centroids.rows();
    assignments.resize(n);
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double dist = sq_dist(pts.row_ptr(i), centroids.row_ptr(c), d);
            if (dist < best) {
                best = dist;
                best_c = c;
            }
        }
        assignments[i] = best_c;
        inertia += best;
    }
    return inertia;
}

// k-means++ D² seeding; all randomness from the caller's generator
inline DenseMatrix kmeanspp_init(const DenseMatrix& pts, std::size_t k, Rng& rng) {
    const std::size_t n = pts.rows();
    const std::size_t d = pts.cols();
    DenseMatrix centroids(k, d);
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    std::size_t first = static_cast<std::size_t>(rng.uniform_index(n));
    chosen[first] = true;
    for (std::size_t j = 0; j < d; ++j) centroids(0, j) = pts(first, j);

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dist = sq_dist(pts.row_ptr(i), centroids.row_ptr(c - 1), d);
            if (dist < d2[i]) d2[i] = dist;
            total += d2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {  // numerical edge: fall back to last positive weight
                for (std::size_t i = n; i-- > 0;)
                    if (d2[i] > 0.0) { pick = i; break; }
            }
        }
        if (pick == n) {  // all remaining distances zero: lowest unchosen index
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) { pick = i; break; }
        }
        chosen[pick] = true;
        for (std::size_t j = 0; j < d; ++j) centroids(c, j) = pts(pick, j);
    }
    return centroids;
}

} // namespace detail

// Lloyd iterations from k-means++ seeding.  The loop stops at the exact fixed
// point (an assignment pass that changes nothing — centroid shift is then 0,
// hence below any tol) or at max_iter.  Empty clusters are re-seeded at the
// point farthest from their current centroid; if every distance is zero the
// cluster legitimately stays empty (degenerate input).
inline ClusterModel kmeans(const ReducedMatrix& points, std::size_t k,
                           std::uint64_t seed, std::size_t max_iter = 300,
                           double tol = 1e-6) {
    const DenseMatrix& pts = points.points;
    const std::size_t n = pts.rows();
    const std::size_t d = pts.cols();
    if (k < 1) throw InvalidConfig("kmeans k must be >= 1");
    if (k > n) throw KTooLarge(k, n);
    (void)tol;  // subsumed by the exact fixed-point stop (shift == 0 < tol)

    Rng rng(seed);
    ClusterModel model;
    model.k = k;
    model.centroids = detail::kmeanspp_init(pts, k, rng);
    model.inertia = detail::assign_points(pts, model.centroids, model.assignments);
    model.inertia_trace.push_back(model.inertia);

    std::vector<double> sums(k * d);
    std::vector<std::size_t> counts(k);
    std::vector<std::size_t> next_assign;

    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        // centroid update, fixed-order accumulation over ascending point ids
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = model.assignments[i];
            ++counts[c];
            for (std::size_t j = 0; j < d; ++j) sums[c * d + j] += pts(i, j);
        }
        DenseMatrix next_centroids(k, d);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < d; ++j)
                    next_centroids(c, j) = sums[c * d + j] / static_cast<double>(counts[c]);
            } else {
                for (std::size_t j = 0; j < d; ++j)
                    next_centroids(c, j) = model.centroids(c, j);
            }
        }
        // re-seed empty clusters
        std::vector<bool> used(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            double best = 0.0;
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i]) continue;
                const double dist =
                    detail::sq_dist(pts.row_ptr(i), next_centroids.row_ptr(c), d);
                if (dist > best) {
                    best = dist;
                    pick = i;
                }
            }
            if (pick != n) {  // best == 0 for all points means truly degenerate
                used[pick] = true;
                for (std::size_t j = 0; j < d; ++j) next_centroids(c, j) = pts(pick, j);
            }
        }

        const double inertia = detail::assign_points(pts, next_centroids, next_assign);
        model.inertia_trace.push_back(inertia);
        model.iterations_run = iter;
        const bool stable = next_assign == model.assignments;
        model.centroids = std::move(next_centroids);
        model.assignments = next_assign;
        model.inertia = inertia;
        if (stable) break;
    }
    return model;
}

// Runs kmeans with seeds seed..seed+n_restarts-1 and keeps the lowest
// inertia (first winner on ties).
inline ClusterModel best_of_restarts(const ReducedMatrix& points, std::size_t k,
                                     std::size_t n_restarts, std::uint64_t seed,
                                     std::size_t max_iter = 300, double tol = 1e-6) {
    if (n_restarts < 1) throw InvalidConfig("n_restarts must be >= 1");
    ClusterModel best;
    bool have = false;
    for (std::size_t r = 0; r < n_restarts; ++r) {
        ClusterModel m = kmeans(points, k, seed + r, max_iter, tol);
        if (!have || m.inertia < best.inertia) {
            best = std::move(m);
            have = true;
        }
    }
    return best;
}

// Mean silhouette over all points; singleton clusters contribute 0.
inline double silhouette_score(const ReducedMatrix& points,
                               const ClusterModel& model) {
    const DenseMatrix& pts = points.points;
    const std::size_t n = pts.rows();
    const std::size_t d = pts.cols();
    const std::size_t k = model.k;
    if (k < 2) throw InvalidConfig("silhouette needs k >= 2");

    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t c : model.assignments) ++sizes[c];

    double total = 0.0;
    std::vector<double> mean_dist(k);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_dist[model.assignments[j]] +=
                std::sqrt(detail::sq_dist(pts.row_ptr(i), pts.row_ptr(j), d));
        }
        const std::size_t ci = model.assignments[i];
        if (sizes[ci] <= 1) continue;  // silhouette 0 for singletons
        const double a = mean_dist[ci] / static_cast<double>(sizes[ci] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == ci || sizes[c] == 0) continue;
            b = std::min(b, mean_dist[c] / static_cast<double>(sizes[c]));
        }
        if (!std::isfinite(b)) continue;  // all other clusters empty
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

// Report helper: silhouette per k over [k_min, k_max]; chooses nothing.
inline std::vector<std::pair<std::size_t, double>> silhouette_sweep(
    const ReducedMatrix& points, std::size_t k_min, std::size_t k_max,
    std::size_t n_restarts, std::uint64_t seed) {
    if (k_min < 2 || k_max < k_min) throw InvalidConfig("bad silhouette sweep range");
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        ClusterModel m = best_of_restarts(points, k, n_restarts, seed);
        out.emplace_back(k, silhouette_score(points, m));
    }
    return out;
}

inline void export_clusters(const std::vector<std::string>& surfaces,
                            const ClusterModel& model, const std::string& path) {
    if (surfaces.size() != model.assignments.size())
        throw SizeMismatch(surfaces.size(), model.assignments.size());
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    for (std::size_t i = 0; i < surfaces.size(); ++i)
        out << surfaces[i] << '\t' << model.assignments[i] << '\n';
}

} // namespace tweetmine
