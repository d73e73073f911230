#include "hcd/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hcd {

bool is_binary_label(const BinaryLabel& x) {
    return std::all_of(x.begin(), x.end(), [](char c) { return c == '0' || c == '1'; });
}

int label_to_index(const BinaryLabel& x) {
    if (!is_binary_label(x) || x.size() > 30)
        throw std::invalid_argument("label_to_index: not a binary label: " + x);
    int v = 0;
    for (char c : x) v = (v << 1) | (c == '1');
    return v;
}

BinaryLabel index_to_label(int index, int depth) {
    if (depth < 0 || depth > 30 || index < 0 || index >= (1 << depth))
        throw std::invalid_argument("index_to_label: index out of range");
    BinaryLabel x(depth, '0');
    for (int b = 0; b < depth; ++b)
        if (index & (1 << (depth - 1 - b))) x[b] = '1';
    return x;
}

int string_similarity(const BinaryLabel& x, const BinaryLabel& y) {
    if (!is_binary_label(x) || !is_binary_label(y))
        throw std::invalid_argument("string_similarity: not a binary label");
    const std::size_t m = std::min(x.size(), y.size());
    for (std::size_t q = 0; q < m; ++q)
        if (x[q] != y[q]) return static_cast<int>(q) + 1;
    return static_cast<int>(m) + 1;
}

int tree_distance(const BinaryLabel& x, const BinaryLabel& y, int d) {
    if (x == y) return 0;
    return d + 1 - string_similarity(x, y);
}

std::int32_t Labeling::community_count() const {
    std::int32_t c = 0;
    for (auto a : assign) c = std::max(c, a + 1);
    return c;
}

std::vector<std::int64_t> Labeling::sizes() const {
    std::vector<std::int64_t> s(community_count(), 0);
    for (auto a : assign) {
        if (a < 0) throw std::invalid_argument("Labeling: negative community id");
        ++s[a];
    }
    return s;
}

void Labeling::validate() const {
    auto s = sizes();
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] == 0)
            throw std::invalid_argument("Labeling: empty community " + std::to_string(k));
    if (!names.empty() && names.size() != s.size())
        throw std::invalid_argument("Labeling: name list size mismatch");
    for (const auto& nm : names)
        if (!is_binary_label(nm)) throw std::invalid_argument("Labeling: bad name " + nm);
}

int CommunityTree::leaf_count() const {
    int c = 0;
    for (const auto& nd : nodes) c += nd.is_leaf();
    return c;
}

int CommunityTree::depth() const {
    int d = 0;
    for (const auto& nd : nodes)
        if (nd.is_leaf()) d = std::max<int>(d, nd.label.size());
    return d;
}

std::vector<int> CommunityTree::leaves() const {
    std::vector<int> out;
    // DFS from the root, '0' child first, so leaves come out in label order.
    std::vector<int> stack = {0};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        const auto& nd = nodes[u];
        if (nd.is_leaf())
            out.push_back(u);
        else {
            if (nd.right >= 0) stack.push_back(nd.right);
            if (nd.left >= 0) stack.push_back(nd.left);
        }
    }
    return out;
}

bool CommunityTree::balanced_to(int q) const {
    for (const auto& nd : nodes)
        if (nd.is_leaf() && static_cast<int>(nd.label.size()) < q) return false;
    return true;
}

Labeling CommunityTree::leaf_labeling(NodeId n) const {
    Labeling lab;
    lab.assign.assign(n, -1);
    for (int u : leaves()) {
        std::int32_t c = static_cast<std::int32_t>(lab.names.size());
        lab.names.push_back(nodes[u].label);
        for (NodeId v : nodes[u].members) {
            if (v < 0 || v >= n)
                throw std::invalid_argument("CommunityTree: member out of range");
            if (lab.assign[v] != -1)
                throw std::invalid_argument("CommunityTree: node in two leaves");
            lab.assign[v] = c;
        }
    }
    for (NodeId v = 0; v < n; ++v)
        if (lab.assign[v] < 0)
            throw std::invalid_argument("CommunityTree: node missing from leaves");
    return lab;
}

void CommunityTree::validate(NodeId n) const {
    if (nodes.empty()) throw std::invalid_argument("CommunityTree: empty");
    leaf_labeling(n).validate();
    for (const auto& nd : nodes) {
        if (!std::is_sorted(nd.members.begin(), nd.members.end()))
            throw std::invalid_argument("CommunityTree: members not sorted");
        if (nd.is_leaf()) continue;
        std::vector<NodeId> merged;
        if (nd.left >= 0)
            merged.insert(merged.end(), nodes[nd.left].members.begin(),
                          nodes[nd.left].members.end());
        if (nd.right >= 0)
            merged.insert(merged.end(), nodes[nd.right].members.begin(),
                          nodes[nd.right].members.end());
        std::sort(merged.begin(), merged.end());
        if (merged != nd.members)
            throw std::invalid_argument("CommunityTree: internal members != union of children");
    }
}

CommunityTree tree_from_leaf_members(
    std::vector<std::pair<BinaryLabel, std::vector<NodeId>>> leaves) {
    if (leaves.empty()) throw std::invalid_argument("tree_from_leaf_members: no leaves");
    std::sort(leaves.begin(), leaves.end());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        auto& [lab, members] = leaves[i];
        if (!is_binary_label(lab))
            throw std::invalid_argument("tree_from_leaf_members: bad label " + lab);
        std::sort(members.begin(), members.end());
        // Sorted order puts a prefix immediately before its extensions.
        if (i + 1 < leaves.size() && leaves[i + 1].first.compare(0, lab.size(), lab) == 0)
            throw std::invalid_argument("tree_from_leaf_members: labels not prefix-free");
    }
    CommunityTree t;
    // Recursive trie build over the sorted label range.
    auto build = [&](auto&& self, std::size_t lo, std::size_t hi,
                     const BinaryLabel& prefix) -> int {
        int idx = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[idx].label = prefix;
        if (hi - lo == 1 && leaves[lo].first == prefix) {
            t.nodes[idx].members = leaves[lo].second;
            return idx;
        }
        std::size_t mid = lo;
        const std::size_t depth = prefix.size();
        while (mid < hi && leaves[mid].first.size() > depth && leaves[mid].first[depth] == '0')
            ++mid;
        if (mid == lo || mid == hi)
            throw std::invalid_argument("tree_from_leaf_members: labels do not form a tree at '" +
                                        prefix + "'");
        int l = self(self, lo, mid, prefix + '0');
        int r = self(self, mid, hi, prefix + '1');
        t.nodes[idx].left = l;
        t.nodes[idx].right = r;
        std::vector<NodeId> merged;
        std::merge(t.nodes[l].members.begin(), t.nodes[l].members.end(),
                   t.nodes[r].members.begin(), t.nodes[r].members.end(),
                   std::back_inserter(merged));
        t.nodes[idx].members = std::move(merged);
        return idx;
    };
    build(build, 0, leaves.size(), "");
    return t;
}

Labeling coarse_labels(const CommunityTree& tree, int q) {
    if (q < 0) throw std::invalid_argument("coarse_labels: q must be >= 0");
    for (const auto& nd : tree.nodes)
        if (nd.is_leaf() && static_cast<int>(nd.label.size()) < q)
            throw std::invalid_argument("coarse_labels: leaf '" + nd.label +
                                        "' is shallower than level " + std::to_string(q));
    const auto& root_members = tree.nodes[0].members;
    const NodeId n = static_cast<NodeId>(root_members.size());
    for (NodeId i = 0; i < n; ++i)
        if (root_members[i] != i)
            throw std::invalid_argument("coarse_labels: tree must cover nodes 0..n-1");
    std::map<BinaryLabel, std::vector<NodeId>> groups;
    for (const auto& nd : tree.nodes)
        if (nd.is_leaf())
            for (NodeId v : nd.members) groups[nd.label.substr(0, q)].push_back(v);
    Labeling lab;
    lab.assign.assign(n, -1);
    for (auto& [prefix, members] : groups) {
        std::int32_t c = static_cast<std::int32_t>(lab.names.size());
        lab.names.push_back(prefix);
        for (NodeId v : members) lab.assign[v] = c;
    }
    lab.validate();
    return lab;
}

}  // namespace hcd
