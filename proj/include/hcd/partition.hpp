#ifndef HCD_PARTITION_HPP
#define HCD_PARTITION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hcd/graph.hpp"

namespace hcd {

// Community names are binary strings over {'0','1'}; "" names the root.
using BinaryLabel = std::string;

bool is_binary_label(const BinaryLabel& x);

// Value of the bits read as a base-2 number, i.e. the 0-based slot of label x
// among all labels of the same length, ordered lexicographically.
int label_to_index(const BinaryLabel& x);
BinaryLabel index_to_label(int index, int depth);

// 1-based position of the first differing bit.  If the labels are equal or
// one is a prefix of the other, returns min(len(x), len(y)) + 1; in
// particular s(x, x) = len(x) + 1.
int string_similarity(const BinaryLabel& x, const BinaryLabel& y);

// Tree distance between depth-d communities: (d + 1 - s) for distinct labels,
// 0 for equal ones.
int tree_distance(const BinaryLabel& x, const BinaryLabel& y, int d);

// Assignment of nodes to communities 0..C-1, optionally carrying the
// binary-string name of each community.
struct Labeling {
    std::vector<std::int32_t> assign;
    std::vector<BinaryLabel> names;  // size C when present, empty otherwise

    std::int32_t community_count() const;
    std::vector<std::int64_t> sizes() const;
    bool has_names() const { return !names.empty(); }
    // Checks ids are 0..C-1 with every community nonempty and names (when
    // present) matching C; throws on violation.
    void validate() const;
};

// Rooted binary tree over a node set.  Each tree node holds its path label,
// the sorted member list, and child indices (-1 for leaves).  Internal
// members are always the union of the children's members.
struct CommunityTree {
    struct Node {
        BinaryLabel label;
        int left = -1;
        int right = -1;
        std::vector<NodeId> members;
        bool is_leaf() const { return left < 0 && right < 0; }
    };
    std::vector<Node> nodes;  // nodes[0] is the root

    int leaf_count() const;
    int depth() const;                 // longest leaf label
    std::vector<int> leaves() const;   // tree-node indices, left to right
    bool balanced_to(int q) const;     // every leaf at depth >= q
    Labeling leaf_labeling(NodeId n) const;
    void validate(NodeId n) const;     // partition + union invariants
};

// Build a tree from a prefix-free set of leaf labels with their members.
CommunityTree tree_from_leaf_members(
    std::vector<std::pair<BinaryLabel, std::vector<NodeId>>> leaves);

// Level-q coarsening: nodes grouped by the length-q prefix of their leaf
// label.  Every leaf must sit at depth >= q; a shallower leaf is an error
// naming the offending branch.
Labeling coarse_labels(const CommunityTree& tree, int q);

}  // namespace hcd

#endif
