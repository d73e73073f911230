#include "hcd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace hcd {

namespace {

int max_id(const std::vector<std::int32_t>& a) {
    std::int32_t m = -1;
    for (auto v : a) {
        if (v < 0) throw std::invalid_argument("metrics: negative community id");
        m = std::max(m, v);
    }
    return m + 1;
}

// Per-node (leaf-index, leaf-label) view of a tree covering nodes 0..n-1.
struct LeafView {
    std::vector<int> leaf_of;             // node -> position in `labels`
    std::vector<BinaryLabel> labels;      // per leaf
};

LeafView leaf_view(const CommunityTree& tree) {
    LeafView v;
    std::int64_t n = 0;
    for (int t : tree.leaves()) n += static_cast<std::int64_t>(tree.nodes[t].members.size());
    v.leaf_of.assign(static_cast<std::size_t>(n), -1);
    for (int t : tree.leaves()) {
        const auto& nd = tree.nodes[t];
        int idx = static_cast<int>(v.labels.size());
        v.labels.push_back(nd.label);
        for (NodeId i : nd.members) {
            if (i < 0 || i >= static_cast<NodeId>(v.leaf_of.size()) || v.leaf_of[i] >= 0)
                throw std::invalid_argument("metrics: tree leaves do not partition 0..n-1");
            v.leaf_of[i] = idx;
        }
    }
    return v;
}

}  // namespace

std::vector<std::vector<std::int64_t>> confusion(const std::vector<std::int32_t>& a,
                                                 const std::vector<std::int32_t>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("confusion: length mismatch");
    const int ka = max_id(a), kb = max_id(b);
    std::vector<std::vector<std::int64_t>> c(ka, std::vector<std::int64_t>(kb, 0));
    for (std::size_t i = 0; i < a.size(); ++i) ++c[a[i]][b[i]];
    return c;
}

double nmi(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    if (a.empty()) throw std::invalid_argument("nmi: empty assignment");
    auto c = confusion(a, b);
    const double n = static_cast<double>(a.size());
    const int ka = static_cast<int>(c.size());
    const int kb = ka > 0 ? static_cast<int>(c[0].size()) : 0;
    std::vector<double> ra(ka, 0.0), rb(kb, 0.0);
    for (int u = 0; u < ka; ++u)
        for (int v = 0; v < kb; ++v) {
            ra[u] += static_cast<double>(c[u][v]);
            rb[v] += static_cast<double>(c[u][v]);
        }
    double ha = 0.0, hb = 0.0, mi = 0.0;
    for (int u = 0; u < ka; ++u)
        if (ra[u] > 0) ha -= ra[u] / n * std::log(ra[u] / n);
    for (int v = 0; v < kb; ++v)
        if (rb[v] > 0) hb -= rb[v] / n * std::log(rb[v] / n);
    for (int u = 0; u < ka; ++u)
        for (int v = 0; v < kb; ++v)
            if (c[u][v] > 0) {
                double puv = static_cast<double>(c[u][v]) / n;
                mi += puv * std::log(n * static_cast<double>(c[u][v]) / (ra[u] * rb[v]));
            }
    if (ha <= 0.0 && hb <= 0.0) return 1.0;
    if (ha <= 0.0 || hb <= 0.0) return 0.0;
    return 2.0 * mi / (ha + hb);
}

std::int64_t hungarian_max(const std::vector<std::vector<std::int64_t>>& score) {
    const int r = static_cast<int>(score.size());
    if (r == 0) return 0;
    const int cdim = static_cast<int>(score[0].size());
    for (const auto& row : score)
        if (static_cast<int>(row.size()) != cdim)
            throw std::invalid_argument("hungarian_max: ragged score matrix");
    if (cdim == 0) return 0;
    const int n = std::max(r, cdim);
    // Square min-cost matrix: negate scores, pad with zeros.
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < cdim; ++j) {
            if (score[i][j] < 0) throw std::invalid_argument("hungarian_max: negative score");
            a[i][j] = -static_cast<double>(score[i][j]);
        }
    // Assignment by shortest augmenting paths with potentials.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[j]) {
                    double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else
                    minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::int64_t total = 0;
    for (int j = 1; j <= n; ++j)
        if (p[j] >= 1 && p[j] <= r && j <= cdim) total += score[p[j] - 1][j - 1];
    return total;
}

double matched_accuracy(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    if (a.empty()) throw std::invalid_argument("matched_accuracy: empty assignment");
    auto c = confusion(a, b);
    return static_cast<double>(hungarian_max(c)) / static_cast<double>(a.size());
}

double level_accuracy(const CommunityTree& est, const CommunityTree& truth, int q) {
    if (q < 1) throw std::invalid_argument("level_accuracy: q must be >= 1");
    Labeling t = coarse_labels(truth, q);
    LeafView ev = leaf_view(est);
    if (ev.leaf_of.size() != t.assign.size())
        throw std::invalid_argument("level_accuracy: trees cover different node sets");
    // group estimated leaves by their length-q prefix (whole label if shorter)
    std::map<BinaryLabel, std::int32_t> groups;
    std::vector<std::int32_t> remap(ev.labels.size());
    for (std::size_t l = 0; l < ev.labels.size(); ++l) {
        BinaryLabel key = ev.labels[l].substr(0, static_cast<std::size_t>(q));
        auto it = groups.find(key);
        if (it == groups.end())
            it = groups.emplace(key, static_cast<std::int32_t>(groups.size())).first;
        remap[l] = it->second;
    }
    std::vector<std::int32_t> e(ev.leaf_of.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = remap[ev.leaf_of[i]];
    return matched_accuracy(e, t.assign);
}

double tree_similarity_error(const CommunityTree& est, const CommunityTree& truth) {
    LeafView ev = leaf_view(est);
    LeafView tv = leaf_view(truth);
    if (ev.leaf_of.size() != tv.leaf_of.size())
        throw std::invalid_argument("tree_similarity_error: trees cover different node sets");
    const std::size_t n = ev.leaf_of.size();
    // joint cells (est leaf, truth leaf) -> node count
    std::map<std::pair<int, int>, double> cells;
    for (std::size_t i = 0; i < n; ++i) ++cells[{ev.leaf_of[i], tv.leaf_of[i]}];
    double num = 0.0, den = 0.0;
    for (const auto& [cu, nu] : cells)
        for (const auto& [cv, nv] : cells) {
            double se = static_cast<double>(string_similarity(ev.labels[cu.first],
                                                              ev.labels[cv.first]));
            double st = static_cast<double>(string_similarity(tv.labels[cu.second],
                                                              tv.labels[cv.second]));
            double w = nu * nv;
            num += w * (se - st) * (se - st);
            den += w * st * st;
        }
    if (den <= 0.0) throw std::invalid_argument("tree_similarity_error: degenerate reference tree");
    return num / den;
}

double prob_matrix_error(const std::vector<std::int32_t>& est_assign, const Matrix& est_b,
                         const std::vector<std::int32_t>& truth_assign, const Matrix& truth_b) {
    if (est_assign.size() != truth_assign.size())
        throw std::invalid_argument("prob_matrix_error: length mismatch");
    if (est_assign.empty()) throw std::invalid_argument("prob_matrix_error: empty assignment");
    const int ke = max_id(est_assign), kt = max_id(truth_assign);
    if (est_b.rows < ke || est_b.cols < ke || truth_b.rows < kt || truth_b.cols < kt)
        throw std::invalid_argument("prob_matrix_error: block matrix smaller than id range");
    std::map<std::pair<int, int>, double> cells;
    for (std::size_t i = 0; i < est_assign.size(); ++i)
        ++cells[{est_assign[i], truth_assign[i]}];
    double num = 0.0;
    for (const auto& [cu, nu] : cells)
        for (const auto& [cv, nv] : cells) {
            double diff = est_b(cu.first, cv.first) - truth_b(cu.second, cv.second);
            num += nu * nv * diff * diff;
        }
    // remove the i == j terms counted above (true matrices have zero diagonals)
    for (const auto& [cu, nu] : cells) {
        double diff = est_b(cu.first, cu.first) - truth_b(cu.second, cu.second);
        num -= nu * diff * diff;
    }
    std::vector<double> tn(kt, 0.0);
    for (auto t : truth_assign) ++tn[t];
    double den = 0.0;
    for (int s = 0; s < kt; ++s)
        for (int t = 0; t < kt; ++t) den += tn[s] * tn[t] * truth_b(s, t) * truth_b(s, t);
    for (int t = 0; t < kt; ++t) den -= tn[t] * truth_b(t, t) * truth_b(t, t);
    if (den <= 0.0)
        throw std::invalid_argument("prob_matrix_error: reference matrix is identically zero");
    return num / den;
}

int count_communities(const CommunityTree& tree) { return tree.leaf_count(); }

}  // namespace hcd
