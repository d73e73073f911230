#include "hcd/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hcd/rng.hpp"

namespace hcd {

namespace {

double sqdist(const Matrix& pts, int row, const Matrix& centers, int c) {
    double s = 0.0;
    for (int j = 0; j < pts.cols; ++j) {
        double d = pts(row, j) - centers(c, j);
        s += d * d;
    }
    return s;
}

// k-means++ seeding: first center uniform, then proportional to squared
// distance from the nearest chosen center.
Matrix seed_centers(const Matrix& pts, int k, CounterRng& rng) {
    const int n = pts.rows, dim = pts.cols;
    Matrix centers(k, dim);
    int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    for (int j = 0; j < dim; ++j) centers(0, j) = pts(first, j);
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int q = 0; q < c; ++q) best = std::min(best, sqdist(pts, i, centers, q));
            d2[i] = best;
            total += best;
        }
        int pick;
        if (total <= 0.0) {
            pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        } else {
            double target = rng.uniform() * total, acc = 0.0;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        }
        for (int j = 0; j < dim; ++j) centers(c, j) = pts(pick, j);
    }
    return centers;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts, int max_iter) {
    const int n = points.rows, dim = points.cols;
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds number of points");
    if (k > 1) {
        bool all_same = true;
        for (int i = 1; i < n && all_same; ++i)
            for (int j = 0; j < dim; ++j)
                if (points(i, j) != points(0, j)) {
                    all_same = false;
                    break;
                }
        if (all_same)
            throw std::runtime_error("kmeans: no separation between points (all rows identical)");
    }

    KmeansResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        CounterRng rng(CounterRng::derive(seed, static_cast<std::uint64_t>(r)));
        Matrix centers = seed_centers(points, k, rng);
        std::vector<int> assign(n, 0);
        std::vector<int> counts(k);
        double obj = std::numeric_limits<double>::infinity();
        for (int it = 0; it < max_iter; ++it) {
            // assignment step
            double new_obj = 0.0;
            for (int i = 0; i < n; ++i) {
                double bd = std::numeric_limits<double>::infinity();
                int bc = 0;
                for (int c = 0; c < k; ++c) {
                    double d = sqdist(points, i, centers, c);
                    if (d < bd) {
                        bd = d;
                        bc = c;
                    }
                }
                assign[i] = bc;
                new_obj += bd;
            }
            // refill empty clusters with the farthest-from-center point
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < n; ++i) ++counts[assign[i]];
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) continue;
                double far_d = -1.0;
                int far_i = 0;
                for (int i = 0; i < n; ++i) {
                    if (counts[assign[i]] <= 1) continue;
                    double d = sqdist(points, i, centers, assign[i]);
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                --counts[assign[far_i]];
                assign[far_i] = c;
                counts[c] = 1;
            }
            // update step
            Matrix nc(k, dim);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < dim; ++j) nc(assign[i], j) += points(i, j);
            for (int c = 0; c < k; ++c)
                for (int j = 0; j < dim; ++j) nc(c, j) /= static_cast<double>(counts[c]);
            centers = std::move(nc);
            if (new_obj >= obj * (1.0 - 1e-12)) {
                obj = std::min(obj, new_obj);
                break;
            }
            obj = new_obj;
        }
        // final objective against final centers
        double final_obj = 0.0;
        for (int i = 0; i < n; ++i) final_obj += sqdist(points, i, centers, assign[i]);
        if (final_obj < best.objective) {
            best.assign = assign;
            best.centers = centers;
            best.objective = final_obj;
            best.restarts_used = r + 1;
        }
    }
    return best;
}

std::vector<int> kmeans2(const Matrix& points, std::uint64_t seed) {
    return kmeans(points, 2, seed).assign;
}

}  // namespace hcd
