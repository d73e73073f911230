#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcd/graph.hpp"
#include "hcd/linalg.hpp"
#include "hcd/partition.hpp"

namespace hcd {

// How a community is split in two at each recursion step.
enum class SplitMethod {
    SignAdjacency,        // sign pattern of the second adjacency eigenvector
    RegularizedSpectral,  // two-cluster k-means on regularized Laplacian eigenvectors
};

struct SplitterSpec {
    SplitMethod method = SplitMethod::SignAdjacency;
    double tau = 0.1;  // regularization weight for RegularizedSpectral
};

// When to stop recursing. All enabled rules are checked; any one of them
// firing makes the current community a leaf. With nothing enabled the
// recursion only stops at the structural floors (size, depth, no edges,
// degenerate split).
struct StoppingSpec {
    bool nonbacktracking = false;  // spectral model-order test, see nb_split_decision
    int fixed_depth = -1;          // >= 0: stop once the label reaches this length
    std::int64_t min_size = -1;    // >= 0: stop when the community is smaller than this

    static StoppingSpec none() { return {}; }
    static StoppingSpec nb() {
        StoppingSpec s;
        s.nonbacktracking = true;
        return s;
    }
    static StoppingSpec fixed(int depth) {
        StoppingSpec s;
        s.fixed_depth = depth;
        return s;
    }
    static StoppingSpec size_floor(std::int64_t size) {
        StoppingSpec s;
        s.min_size = size;
        return s;
    }
};

struct HcdOptions {
    std::uint64_t seed = 12345;
    std::int64_t min_size = 4;  // hard floor: communities below this are never split
    double tol = 1e-8;          // eigensolver residual tolerance for splitting
    double nb_tol = 1e-6;       // looser tolerance for the stopping test (few digits suffice)
    int max_depth = 30;         // hard cap on label length
};

// Outcome of one two-way split attempt, with solver instrumentation.
struct SplitOutcome {
    std::vector<int> assign;  // 0/1 per local node
    double first_value = 0.0;
    double second_value = 0.0;
    double residual = 0.0;
    bool degenerate_gap = false;  // split direction ill-defined (tied magnitudes)
    std::int64_t applies = 0;     // operator applications consumed
    std::int64_t work = 0;        // edge-visit work units consumed
};

// Sign splitter on an arbitrary symmetric operator (useful for expected
// adjacency matrices): nodes with a nonnegative entry in the
// second-largest-magnitude eigenvector (sign-canonicalized so its first
// nonzero coordinate is positive) go to side 0, the rest to side 1.
SplitOutcome sign_split_full(const LinearOperator& op, double tol = 1e-8,
                             std::uint64_t seed = 12345);
std::vector<int> sign_split(const Graph& g, double tol = 1e-8, std::uint64_t seed = 12345);

// Two-cluster regularized spectral clustering: k-means on the rows of the
// two leading eigenvectors of the tau-regularized normalized adjacency.
SplitOutcome rsc_split_full(const Graph& g, double tau = 0.1, double tol = 1e-8,
                            std::uint64_t seed = 12345);
std::vector<int> rsc_split(const Graph& g, double tau = 0.1, double tol = 1e-8,
                           std::uint64_t seed = 12345);

// Model-order test deciding whether a graph holds more than one community:
// the second-largest real part of the non-backtracking spectrum is compared
// against the bulk radius estimate sqrt(sum(d^2)/sum(d) - 1). Split when it
// exceeds the radius.
struct NbDecision {
    bool split = false;
    double second_real = 0.0;
    double threshold = 0.0;
    double residual = 0.0;
    std::int64_t applies = 0;
    std::int64_t work = 0;
};
NbDecision nb_split_decision(const Graph& g, double tol = 1e-6, std::uint64_t seed = 12345);

// Per-tree-node record of what the recursion did, parallel to
// HcdResult::tree.nodes. reason is "split" or one of the leaf reasons
// "leaf:min_size", "leaf:max_depth", "leaf:no_edges", "leaf:stopping_rule",
// "leaf:degenerate_split", "leaf:solver_failure".
struct SplitDiagnostics {
    std::string reason;
    std::int64_t size = 0;
    std::int64_t nnz = 0;
    double second_value = 0.0;
    double residual = 0.0;
    bool degenerate_gap = false;
    double nb_second = 0.0;     // set when the non-backtracking test ran
    double nb_threshold = 0.0;  // set when the non-backtracking test ran
    bool nb_ran = false;
};

struct HcdResult {
    CommunityTree tree;
    std::vector<SplitDiagnostics> diag;  // parallel to tree.nodes
    Labeling labels;                     // leaf communities in tree order
    // Sum of sub-adjacency nonzeros over the tree nodes at each level; the
    // communities at one level are disjoint, so each entry is bounded by the
    // nonzeros of the full adjacency.
    std::vector<std::int64_t> level_nnz;
    std::int64_t splitter_applies = 0;
    std::int64_t splitter_work = 0;  // edge-visit units spent splitting
    std::int64_t stopper_applies = 0;
    std::int64_t stopper_work = 0;  // edge-visit units spent on stopping tests
    int k_hat() const { return tree.leaf_count(); }
};

// Recursive bi-partitioning driver: split, recurse on both sides, stop per
// the stopping rules and structural floors.
HcdResult recursive_partition(const Graph& g, const SplitterSpec& splitter,
                              const StoppingSpec& stopping, const HcdOptions& opts);

// Flat k-way baseline: k-means on the rows of the k leading eigenvectors of
// the tau-regularized normalized adjacency.
struct KwayResult {
    Labeling labels;
    std::int64_t applies = 0;
    std::int64_t work = 0;  // edge-visit units
};
KwayResult kway_rsc(const Graph& g, int k, double tau = 0.1, double tol = 1e-8,
                    std::uint64_t seed = 12345);

// Maximum-likelihood block probabilities for a fixed assignment: observed
// edge density between (and within) the assigned communities.
struct FittedBlockModel {
    Matrix B;                         // K x K densities
    std::vector<std::int64_t> sizes;  // community sizes
};
FittedBlockModel fit_sbm(const Graph& g, const std::vector<std::int32_t>& assign);

// Binary hierarchy over pre-formed communities from their connection
// probabilities: recursively sign-split the size-weighted block matrix
// diag(sqrt(sizes)) * B * diag(sqrt(sizes)), which has the same spectrum as
// the expected adjacency of the corresponding block model. Gives flat
// clusterings a tree so hierarchy metrics apply to them too. `p` is either
// the C x C block probability matrix for the C communities in `labels`, or an
// n x n matrix constant on community blocks (reduced by block averaging).
// non_unique is set when some split direction was ill-defined (tied
// eigenvalue magnitudes or a one-sided eigenvector, resolved
// deterministically).
struct BlockTreeResult {
    CommunityTree tree;
    bool non_unique = false;
};
BlockTreeResult tree_from_probability_matrix(const Matrix& p, const Labeling& labels);

}  // namespace hcd
