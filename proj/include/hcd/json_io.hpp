#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hcd/hcd.hpp"
#include "hcd/partition.hpp"

namespace hcd {

using ordered_json = nlohmann::ordered_json;

// Nested tree serialization. Internal nodes carry {"label", "children":
// [left, right]}, leaves carry {"label", "members": [...]}. Members are the
// external node ids when `names` is given (one per node index), the integer
// indices otherwise.
ordered_json tree_to_json(const CommunityTree& tree,
                          const std::vector<std::string>& names = {});
// Inverse of tree_to_json with integer members.
CommunityTree tree_from_json(const ordered_json& j);

// Full detection result: {"k_hat", "labels": {id: community label},
// "tree": nested, "diagnostics": [per tree node, in tree order],
// "level_nnz", "splitter", "stopper"}.
ordered_json result_to_json(const HcdResult& result,
                            const std::vector<std::string>& names = {});

// Canonical text form used by the CLI: 2-space indent plus trailing newline,
// so identical inputs produce byte-identical files.
std::string dump_json(const ordered_json& j);

}  // namespace hcd
