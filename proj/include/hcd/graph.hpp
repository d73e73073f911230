#ifndef HCD_GRAPH_HPP
#define HCD_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hcd {

using NodeId = std::int32_t;

// Undirected simple graph in CSR form.  Neighbor lists are sorted, self loops
// and parallel edges are removed at construction, and every node keeps the
// external identifier it carried in the input (generated graphs use their
// decimal index).
class Graph {
public:
    Graph() = default;

    // Build from an unnormalized edge list over nodes 0..n-1.  Duplicate,
    // reversed and self edges are collapsed/dropped.  If ids is empty the
    // decimal indices are used as external identifiers.
    static Graph from_edges(NodeId n,
                            std::vector<std::pair<NodeId, NodeId>> edges,
                            std::vector<std::string> ids = {});

    // Edges must arrive sorted by (i, j) with i < j and without duplicates;
    // used by the samplers to skip the normalization pass.
    static Graph from_sorted_edges(NodeId n,
                                   const std::vector<std::pair<NodeId, NodeId>>& edges,
                                   std::vector<std::string> ids = {});

    NodeId node_count() const { return n_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(adj_.size()) / 2; }
    // Number of nonzero adjacency entries (2 * edge_count).
    std::int64_t nnz() const { return static_cast<std::int64_t>(adj_.size()); }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    std::int64_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    const std::string& node_id(NodeId v) const { return ids_[v]; }
    const std::vector<std::string>& node_ids() const { return ids_; }

private:
    NodeId n_ = 0;
    std::vector<std::int64_t> offsets_ = {0};
    std::vector<NodeId> adj_;
    std::vector<std::string> ids_;
};

// Parse whitespace-separated id pairs, one edge per line.  Lines starting
// with '#' and blank lines are skipped; a line with fewer than two tokens is
// an error reported with its line number.  Extra tokens on a line (weights
// etc.) are ignored.  Node indices are assigned in order of first appearance.
Graph from_edge_list(std::istream& in);
Graph from_edge_list(const std::vector<std::string>& lines);
Graph read_edge_list_file(const std::string& path);

// Emit "u v" node-id pairs, one line per edge, in ascending internal-index
// order, so that from_edge_list(write_edge_list(g)) preserves the node ids.
void write_edge_list(const Graph& g, std::ostream& out);

struct DegreeVector {
    std::vector<std::int64_t> degree;
    std::int64_t total = 0;  // sum of degrees = 2 * edge_count
};
DegreeVector degrees(const Graph& g);

// Subgraph induced by the given node set (any order, duplicates rejected).
// Subgraph node u corresponds to the u-th smallest member of the set and
// keeps its external identifier.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

// Node set of the largest connected component, ascending.  Ties on size are
// broken toward the component containing the smallest node index.
std::vector<NodeId> largest_connected_component(const Graph& g);

// Maximal node set whose induced subgraph has minimum degree >= k, ascending.
std::vector<NodeId> k_core(const Graph& g, int k);

}  // namespace hcd

#endif
