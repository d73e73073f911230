#include "hcd/json_io.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace hcd {

namespace {

ordered_json node_to_json(const CommunityTree& tree, int idx,
                          const std::vector<std::string>& names) {
    const auto& nd = tree.nodes[idx];
    ordered_json j;
    j["label"] = nd.label;
    if (nd.is_leaf()) {
        ordered_json members = ordered_json::array();
        for (NodeId m : nd.members) {
            if (!names.empty()) {
                if (m < 0 || static_cast<std::size_t>(m) >= names.size())
                    throw std::invalid_argument("tree_to_json: member outside the name table");
                members.push_back(names[m]);
            } else
                members.push_back(m);
        }
        j["members"] = std::move(members);
    } else {
        ordered_json children = ordered_json::array();
        children.push_back(node_to_json(tree, nd.left, names));
        children.push_back(node_to_json(tree, nd.right, names));
        j["children"] = std::move(children);
    }
    return j;
}

int node_from_json(const ordered_json& j, CommunityTree& tree) {
    if (!j.is_object() || !j.contains("label"))
        throw std::invalid_argument("tree_from_json: node must be an object with a label");
    const int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({j.at("label").get<std::string>(), -1, -1, {}});
    if (j.contains("children")) {
        const auto& ch = j.at("children");
        if (!ch.is_array() || ch.size() != 2)
            throw std::invalid_argument("tree_from_json: children must be a pair");
        int left = node_from_json(ch[0], tree);
        tree.nodes[idx].left = left;
        int right = node_from_json(ch[1], tree);
        tree.nodes[idx].right = right;
        // internal members = union of the children's members
        auto& nd = tree.nodes[idx];
        const auto& lm = tree.nodes[nd.left].members;
        const auto& rm = tree.nodes[nd.right].members;
        nd.members.reserve(lm.size() + rm.size());
        std::merge(lm.begin(), lm.end(), rm.begin(), rm.end(), std::back_inserter(nd.members));
    } else if (j.contains("members")) {
        auto& mem = tree.nodes[idx].members;
        for (const auto& m : j.at("members")) {
            if (!m.is_number_integer())
                throw std::invalid_argument("tree_from_json: members must be integers");
            mem.push_back(m.get<NodeId>());
        }
        std::sort(mem.begin(), mem.end());
    } else
        throw std::invalid_argument("tree_from_json: node needs children or members");
    return idx;
}

}  // namespace

ordered_json tree_to_json(const CommunityTree& tree, const std::vector<std::string>& names) {
    if (tree.nodes.empty()) throw std::invalid_argument("tree_to_json: empty tree");
    return node_to_json(tree, 0, names);
}

CommunityTree tree_from_json(const ordered_json& j) {
    CommunityTree tree;
    node_from_json(j, tree);
    return tree;
}

ordered_json result_to_json(const HcdResult& result, const std::vector<std::string>& names) {
    ordered_json j;
    j["k_hat"] = result.k_hat();
    ordered_json labels = ordered_json::object();
    const auto& assign = result.labels.assign;
    for (std::size_t i = 0; i < assign.size(); ++i) {
        std::string key = !names.empty() ? names[i] : std::to_string(i);
        labels[key] = result.labels.names[assign[i]];
    }
    j["labels"] = std::move(labels);
    j["tree"] = tree_to_json(result.tree, names);
    ordered_json diags = ordered_json::array();
    for (std::size_t t = 0; t < result.diag.size(); ++t) {
        const auto& d = result.diag[t];
        ordered_json e;
        e["label"] = result.tree.nodes[t].label;
        e["reason"] = d.reason;
        e["size"] = d.size;
        e["nnz"] = d.nnz;
        if (d.reason == "split" || d.reason == "leaf:degenerate_split") {
            e["second_value"] = d.second_value;
            e["residual"] = d.residual;
            e["degenerate_gap"] = d.degenerate_gap;
        }
        if (d.nb_ran) {
            e["nb_second"] = d.nb_second;
            e["nb_threshold"] = d.nb_threshold;
        }
        diags.push_back(std::move(e));
    }
    j["diagnostics"] = std::move(diags);
    j["level_nnz"] = result.level_nnz;
    j["splitter"] = {{"applies", result.splitter_applies}, {"work", result.splitter_work}};
    j["stopper"] = {{"applies", result.stopper_applies}, {"work", result.stopper_work}};
    return j;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace hcd
