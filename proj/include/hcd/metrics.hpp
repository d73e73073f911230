#pragma once

#include <cstdint>
#include <vector>

#include "hcd/linalg.hpp"
#include "hcd/partition.hpp"

namespace hcd {

// Contingency table between two assignments over the same node set:
// counts[u][v] = #nodes with a-community u and b-community v.
std::vector<std::vector<std::int64_t>> confusion(const std::vector<std::int32_t>& a,
                                                 const std::vector<std::int32_t>& b);

// Normalized mutual information, 2 I(a; b) / (H(a) + H(b)) with natural
// logarithms. Both partitions trivial (zero entropy) gives 1; exactly one
// trivial gives 0.
double nmi(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b);

// Maximum-weight assignment value of a (possibly rectangular) nonnegative
// score matrix; unmatched rows/columns contribute zero.
std::int64_t hungarian_max(const std::vector<std::vector<std::int64_t>>& score);

// Fraction of nodes classified correctly under the best one-to-one matching
// of communities between the two assignments.
double matched_accuracy(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b);

// Accuracy of the estimated hierarchy at level q: nodes are grouped by the
// length-q prefix of their leaf labels on each side (estimated leaves
// shallower than q contribute their full label) and scored with
// matched_accuracy. The reference tree must reach depth q everywhere.
double level_accuracy(const CommunityTree& est, const CommunityTree& truth, int q);

// Normalized squared distance between the pairwise label-similarity
// profiles of two hierarchies over the same n nodes:
//   sum_{i,j} (s_est(i,j) - s_truth(i,j))^2 / sum_{i,j} s_truth(i,j)^2
// where s(i,j) is 1 + the length of the common prefix of the leaf labels of
// i and j. Computed blockwise over (est leaf, truth leaf) cells.
double tree_similarity_error(const CommunityTree& est, const CommunityTree& truth);

// Relative squared error between two expected adjacency matrices given in
// block form (assignment + block probability matrix), with zero diagonals:
//   ||P_est - P_truth||_F^2 / ||P_truth||_F^2 over off-diagonal entries.
double prob_matrix_error(const std::vector<std::int32_t>& est_assign, const Matrix& est_b,
                         const std::vector<std::int32_t>& truth_assign, const Matrix& truth_b);

// Number of communities an estimated hierarchy proposes (its leaf count).
int count_communities(const CommunityTree& tree);

}  // namespace hcd
