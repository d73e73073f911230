#include "hcd/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hcd {

namespace {

std::vector<std::string> default_ids(NodeId n) {
    std::vector<std::string> ids(n);
    for (NodeId i = 0; i < n; ++i) ids[i] = std::to_string(i);
    return ids;
}

}  // namespace

Graph Graph::from_edges(NodeId n, std::vector<std::pair<NodeId, NodeId>> edges,
                        std::vector<std::string> ids) {
    for (auto& [a, b] : edges) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (a > b) std::swap(a, b);
    }
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return from_sorted_edges(n, edges, std::move(ids));
}

Graph Graph::from_sorted_edges(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                               std::vector<std::string> ids) {
    Graph g;
    g.n_ = n;
    g.ids_ = ids.empty() ? default_ids(n) : std::move(ids);
    if (static_cast<NodeId>(g.ids_.size()) != n)
        throw std::invalid_argument("node id list size mismatch");
    std::vector<std::int64_t> deg(n, 0);
    for (const auto& [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    g.offsets_.assign(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
    g.adj_.resize(g.offsets_[n]);
    std::vector<std::int64_t> pos(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [a, b] : edges) {
        g.adj_[pos[a]++] = b;
        g.adj_[pos[b]++] = a;
    }
    for (NodeId i = 0; i < n; ++i)
        std::sort(g.adj_.begin() + g.offsets_[i], g.adj_.begin() + g.offsets_[i + 1]);
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

Graph from_edge_list(const std::vector<std::string>& lines) {
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> ids;
    std::vector<std::pair<NodeId, NodeId>> edges;
    auto intern = [&](const std::string& tok) {
        auto [it, inserted] = index.try_emplace(tok, static_cast<NodeId>(ids.size()));
        if (inserted) ids.push_back(tok);
        return it->second;
    };
    std::size_t lineno = 0;
    for (const auto& line : lines) {
        ++lineno;
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a)) continue;  // blank line
        if (a[0] == '#') continue;
        if (!(ls >> b))
            throw std::runtime_error("edge list line " + std::to_string(lineno) +
                                     ": expected two tokens");
        edges.emplace_back(intern(a), intern(b));
    }
    const auto n = static_cast<NodeId>(ids.size());
    return Graph::from_edges(n, std::move(edges), std::move(ids));
}

Graph from_edge_list(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return from_edge_list(lines);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list file: " + path);
    return from_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    for (NodeId i = 0; i < g.node_count(); ++i)
        for (NodeId j : g.neighbors(i))
            if (j > i) out << g.node_id(i) << ' ' << g.node_id(j) << '\n';
}

DegreeVector degrees(const Graph& g) {
    DegreeVector d;
    d.degree.resize(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) {
        d.degree[i] = g.degree(i);
        d.total += d.degree[i];
    }
    return d;
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
    std::vector<NodeId> sel(nodes.begin(), nodes.end());
    std::sort(sel.begin(), sel.end());
    if (std::adjacent_find(sel.begin(), sel.end()) != sel.end())
        throw std::invalid_argument("induced_subgraph: duplicate node index");
    if (!sel.empty() && (sel.front() < 0 || sel.back() >= g.node_count()))
        throw std::invalid_argument("induced_subgraph: node index out of range");
    std::vector<NodeId> local(g.node_count(), -1);
    for (NodeId u = 0; u < static_cast<NodeId>(sel.size()); ++u) local[sel[u]] = u;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::string> ids(sel.size());
    for (NodeId u = 0; u < static_cast<NodeId>(sel.size()); ++u) {
        ids[u] = g.node_id(sel[u]);
        for (NodeId v : g.neighbors(sel[u]))
            if (v > sel[u] && local[v] >= 0) edges.emplace_back(u, local[v]);
    }
    std::sort(edges.begin(), edges.end());
    return Graph::from_sorted_edges(static_cast<NodeId>(sel.size()), edges, std::move(ids));
}

std::vector<NodeId> largest_connected_component(const Graph& g) {
    const NodeId n = g.node_count();
    std::vector<NodeId> comp(n, -1);
    std::vector<NodeId> best, current;
    std::deque<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        current.clear();
        comp[s] = s;
        queue.push_back(s);
        while (!queue.empty()) {
            NodeId u = queue.front();
            queue.pop_front();
            current.push_back(u);
            for (NodeId v : g.neighbors(u))
                if (comp[v] < 0) {
                    comp[v] = s;
                    queue.push_back(v);
                }
        }
        // Scanning in index order, the first component of a given size is the
        // one containing the smallest node index, so strict > keeps the tie
        // break toward the smallest minimum index.
        if (current.size() > best.size()) best = current;
    }
    std::sort(best.begin(), best.end());
    return best;
}

std::vector<NodeId> k_core(const Graph& g, int k) {
    if (k < 0) throw std::invalid_argument("k_core: k must be >= 0");
    const NodeId n = g.node_count();
    std::vector<std::int64_t> deg(n);
    for (NodeId i = 0; i < n; ++i) deg[i] = g.degree(i);
    std::vector<char> removed(n, 0);
    std::deque<NodeId> queue;
    for (NodeId i = 0; i < n; ++i)
        if (deg[i] < k) {
            removed[i] = 1;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : g.neighbors(u))
            if (!removed[v] && --deg[v] < k) {
                removed[v] = 1;
                queue.push_back(v);
            }
    }
    std::vector<NodeId> keep;
    for (NodeId i = 0; i < n; ++i)
        if (!removed[i]) keep.push_back(i);
    return keep;
}

}  // namespace hcd
