#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcd/graph.hpp"
#include "hcd/linalg.hpp"
#include "hcd/partition.hpp"

namespace hcd {

// Random graph model whose communities sit at the leaves of a depth-d
// complete binary tree. Communities are labelled by d-bit strings; the edge
// probability between two nodes depends only on how far up the tree their
// community labels separate: probs[0] within a community, probs[t] when the
// labels split t levels above the leaves.
struct BtsbmParams {
    int depth = 1;                    // d >= 1; community count K = 2^d
    std::vector<std::int64_t> sizes;  // length K, community sizes in label-index order
    std::vector<double> probs;        // length d+1, probs[t] = edge prob at tree distance t

    int community_count() const { return 1 << depth; }
    std::int64_t total_nodes() const;
    bool balanced() const;
    // probs non-increasing with probs[0] > probs[d] (closer in the tree means
    // denser), or the reverse.
    bool assortative() const;
    bool disassortative() const;
    void validate() const;  // throws std::invalid_argument on malformed input

    static BtsbmParams balanced_model(int depth, std::int64_t community_size,
                                      std::vector<double> probs);
};

// General stochastic block model with binary-string community labels; the
// result of flattening a BtsbmParams or of pruning its tree (merged leaves
// keep within-probability probs[0], cross probabilities follow the original
// hierarchy). Labels must be prefix-free.
struct BlockModel {
    std::vector<BinaryLabel> labels;  // length K, prefix-free
    std::vector<std::int64_t> sizes;  // length K
    Matrix B;                         // K x K symmetric connection probabilities

    int community_count() const { return static_cast<int>(labels.size()); }
    std::int64_t total_nodes() const;
    void validate() const;

    // Node -> community index / label, blocks laid out contiguously in label order.
    std::vector<int> node_community() const;
    std::vector<BinaryLabel> node_labels() const;
    // Ground-truth hierarchy over node indices (leaves in label order).
    CommunityTree tree() const;
    Labeling labeling() const;
};

BlockModel block_model_of(const BtsbmParams& params);

// Prune the depth-d tree down to the given prefix-free leaf set (labels of
// length <= depth covering every depth-d string). Each pruned leaf becomes a
// single community of the summed size with internal probability probs[0].
BlockModel merge_communities(const BtsbmParams& params,
                             const std::vector<BinaryLabel>& leaves);

// Connection probability between two communities of the depth-d model,
// given their labels.
double connection_prob(const BtsbmParams& params, const BinaryLabel& x, const BinaryLabel& y);

// K x K matrix of community-to-community probabilities.
Matrix block_matrix(const BtsbmParams& params);

// n x n expected-adjacency matrices: the "tilde" variant keeps probs[0] on
// the diagonal blocks' diagonal, the plain variant subtracts it (zero
// diagonal, matching the expectation of a loop-free adjacency matrix).
Matrix population_matrix_tilde(const BtsbmParams& params);
Matrix population_matrix(const BtsbmParams& params);

// Sample a simple undirected graph: each pair {i, j} is an edge
// independently with the block probability. Deterministic per seed.
Graph sample_block_model(const BlockModel& model, std::uint64_t seed);
Graph sample_adjacency(const BtsbmParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Closed-form spectrum of the balanced model (equal community sizes m).
//
// The expected matrix with diagonal kept has d+1 distinct nonzero
// eigenvalue levels:
//   level 0:       m * (p0 + sum_{r=1..d} 2^{r-1} p_r)         multiplicity 1
//   level q>=1:    m * (p0 + sum_{r=1..d-q} 2^{r-1} p_r
//                        - 2^{d-q} p_{d-q+1})                   multiplicity 2^{q-1}
// plus the eigenvalue 0 with multiplicity n - K.

// The d+1 level values (index = level q).
std::vector<double> analytic_eigenvalue_levels(const BtsbmParams& params);
// Multiplicity of each level among the K structural eigenvalues.
std::vector<std::int64_t> analytic_level_multiplicities(int depth);
// Full length-n eigenvalue multiset of the kept-diagonal expected matrix,
// sorted descending.
std::vector<double> analytic_population_spectrum(const BtsbmParams& params);

// The same values reordered by decreasing magnitude (ties broken by value,
// larger first).
std::vector<double> sorted_by_magnitude(std::vector<double> values);

// Eigendecomposition of the K x K block matrix in the +/-1 orthogonal basis
// U = H / sqrt(K) (H the Kronecker-power sign matrix, H(x,y) = (-1)^{x.y}):
// B = U diag(slots) U. Slot 0 carries level 0; slot j >= 1 carries level
// d - (trailing zero count of j).
Matrix hadamard_eigenbasis(int depth);
std::vector<double> hadamard_slot_values(const BtsbmParams& params);

// Gap between the second-largest-magnitude eigenvalue and the rest of the
// spectrum, which controls when the sign of the second eigenvector recovers
// the root split: n * min(p_d, (p_{d-1} - p_d) / 2) in the assortative case,
// n * (p_d - p_{d-1}) / 2 in the dis-assortative case.
double analytic_second_eigengap(const BtsbmParams& params);

// Unit second eigenvector of the balanced model: constant +1/sqrt(n) on the
// first half of the nodes and -1/sqrt(n) on the second half.
std::vector<double> analytic_second_eigvec(const BtsbmParams& params);

}  // namespace hcd
