#pragma once

#include <cstdint>
#include <vector>

#include "hcd/linalg.hpp"

namespace hcd {

struct KmeansResult {
    std::vector<int> assign;   // size = number of rows, values in [0, k)
    Matrix centers;            // k x dim
    double objective = 0.0;    // sum of squared distances to assigned centers
    int restarts_used = 0;
};

// Lloyd's algorithm with k-means++ seeding. Runs `restarts` independent
// seeded attempts and keeps the lowest objective; fully deterministic for a
// given (points, k, seed). Empty clusters are refilled with the point
// farthest from its center. Throws std::invalid_argument when k exceeds the
// number of rows, and a std::runtime_error mentioning "no separation" when
// k > 1 but every row is identical (no meaningful split exists).
KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts = 10,
                    int max_iter = 100);

// Convenience wrapper for the common two-cluster case: returns assignments.
std::vector<int> kmeans2(const Matrix& points, std::uint64_t seed);

}  // namespace hcd
