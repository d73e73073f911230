#include "hcd/hcd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hcd/kmeans.hpp"
#include "hcd/rng.hpp"

namespace hcd {

namespace {

constexpr std::uint64_t kSplitSalt = 0x51D;
constexpr std::uint64_t kStopSalt = 0x570D;
constexpr std::uint64_t kEmbedSalt = 0xE3BD;
constexpr std::uint64_t kClusterSalt = 0xC15;

}  // namespace

SplitOutcome sign_split_full(const LinearOperator& op, double tol, std::uint64_t seed) {
    const std::int64_t a0 = op.applies(), w0 = op.work_done();
    SecondEigen se = second_by_magnitude(op, tol, seed);
    SplitOutcome out;
    out.first_value = se.first.value;
    out.second_value = se.second.value;
    out.residual = std::max(se.first.residual, se.second.residual);
    out.degenerate_gap = se.degenerate_gap;
    out.assign.resize(se.second.vector.size());
    for (std::size_t i = 0; i < out.assign.size(); ++i)
        out.assign[i] = se.second.vector[i] >= 0.0 ? 0 : 1;
    out.applies = op.applies() - a0;
    out.work = op.work_done() - w0;
    return out;
}

std::vector<int> sign_split(const Graph& g, double tol, std::uint64_t seed) {
    LinearOperator op = adjacency_operator(g);
    return sign_split_full(op, tol, seed).assign;
}

SplitOutcome rsc_split_full(const Graph& g, double tau, double tol, std::uint64_t seed) {
    LinearOperator base = regularized_laplacian_op(g, tau);
    LinearOperator op = shifted_operator(base, 1.0);  // spectrum moved to [0, 2]
    const std::int64_t a0 = op.applies(), w0 = op.work_done();
    auto pairs = lanczos_extreme(op, 2, tol, 500, CounterRng::derive(seed, kEmbedSalt));
    SplitOutcome out;
    out.first_value = pairs[0].value - 1.0;
    out.second_value = pairs[1].value - 1.0;
    out.residual = std::max(pairs[0].residual, pairs[1].residual);
    out.applies = op.applies() - a0;
    out.work = op.work_done() - w0;
    canonicalize_sign(pairs[0].vector);
    canonicalize_sign(pairs[1].vector);
    const int n = static_cast<int>(g.node_count());
    Matrix points(n, 2);
    for (int i = 0; i < n; ++i) {
        points(i, 0) = pairs[0].vector[i];
        points(i, 1) = pairs[1].vector[i];
    }
    try {
        out.assign = kmeans2(points, CounterRng::derive(seed, kClusterSalt));
    } catch (const std::runtime_error&) {
        // identical embedding rows: no meaningful two-way split
        out.assign.assign(n, 0);
        return out;
    }
    // deterministic side naming: the first node defines side 0
    if (!out.assign.empty() && out.assign[0] == 1)
        for (int& a : out.assign) a = 1 - a;
    return out;
}

std::vector<int> rsc_split(const Graph& g, double tau, double tol, std::uint64_t seed) {
    return rsc_split_full(g, tau, tol, seed).assign;
}

NbDecision nb_split_decision(const Graph& g, double tol, std::uint64_t seed) {
    NbDecision d;
    d.threshold = std::sqrt(std::max(0.0, nb_norm_estimate(g)));
    RealPartsResult r = nb_leading_real_parts(g, 2, tol, seed);
    d.second_real = r.values[1];
    d.residual = r.residual;
    d.applies = r.applies;
    d.work = r.work;
    d.split = d.second_real > d.threshold;
    return d;
}

// ---------------------------------------------------------------------------
// recursive driver

namespace {

struct Builder {
    const Graph& g;
    const SplitterSpec& splitter;
    const StoppingSpec& stopping;
    const HcdOptions& opts;
    HcdResult out;

    Builder(const Graph& gg, const SplitterSpec& sp, const StoppingSpec& st, const HcdOptions& op)
        : g(gg), splitter(sp), stopping(st), opts(op) {}

    void note_level(std::size_t level, std::int64_t nnz) {
        if (out.level_nnz.size() <= level) out.level_nnz.resize(level + 1, 0);
        out.level_nnz[level] += nnz;
        if (out.level_nnz[level] > g.nnz())
            throw std::logic_error("recursive_partition: per-level edge accounting exceeded the graph");
    }

    SplitOutcome run_splitter(const Graph& sub, std::uint64_t seed) {
        if (splitter.method == SplitMethod::SignAdjacency) {
            LinearOperator op = adjacency_operator(sub);
            return sign_split_full(op, opts.tol, seed);
        }
        return rsc_split_full(sub, splitter.tau, opts.tol, seed);
    }

    int build(std::vector<NodeId> members, const BinaryLabel& label, std::uint64_t seed) {
        const int idx = static_cast<int>(out.tree.nodes.size());
        out.tree.nodes.push_back({label, -1, -1, members});
        out.diag.emplace_back();

        Graph sub = induced_subgraph(g, members);
        SplitDiagnostics d;
        d.size = static_cast<std::int64_t>(members.size());
        d.nnz = sub.nnz();
        note_level(label.size(), sub.nnz());

        std::vector<NodeId> side0, side1;
        if (d.size < opts.min_size)
            d.reason = "leaf:min_size";
        else if (static_cast<int>(label.size()) >= opts.max_depth)
            d.reason = "leaf:max_depth";
        else if (sub.edge_count() == 0)
            d.reason = "leaf:no_edges";
        else {
            if (stopping.fixed_depth >= 0 && static_cast<int>(label.size()) >= stopping.fixed_depth)
                d.reason = "leaf:stopping_rule";
            else if (stopping.min_size >= 0 && d.size < stopping.min_size)
                d.reason = "leaf:stopping_rule";
            else if (stopping.nonbacktracking) {
                try {
                    NbDecision nb =
                        nb_split_decision(sub, opts.nb_tol, CounterRng::derive(seed, kStopSalt));
                    out.stopper_applies += nb.applies;
                    out.stopper_work += nb.work;
                    d.nb_ran = true;
                    d.nb_second = nb.second_real;
                    d.nb_threshold = nb.threshold;
                    if (!nb.split) d.reason = "leaf:stopping_rule";
                } catch (const SolverError&) {
                    d.reason = "leaf:solver_failure";
                }
            }
            if (d.reason.empty()) {
                try {
                    SplitOutcome sp = run_splitter(sub, CounterRng::derive(seed, kSplitSalt));
                    out.splitter_applies += sp.applies;
                    out.splitter_work += sp.work;
                    d.second_value = sp.second_value;
                    d.residual = sp.residual;
                    d.degenerate_gap = sp.degenerate_gap;
                    for (std::size_t i = 0; i < sp.assign.size(); ++i)
                        (sp.assign[i] == 0 ? side0 : side1).push_back(members[i]);
                    if (side0.empty() || side1.empty())
                        d.reason = "leaf:degenerate_split";
                    else
                        d.reason = "split";
                } catch (const SolverError&) {
                    d.reason = "leaf:solver_failure";
                }
            }
        }

        out.diag[idx] = d;
        if (d.reason == "split") {
            int left = build(std::move(side0), label + "0", CounterRng::derive(seed, 0));
            out.tree.nodes[idx].left = left;
            int right = build(std::move(side1), label + "1", CounterRng::derive(seed, 1));
            out.tree.nodes[idx].right = right;
        }
        return idx;
    }
};

}  // namespace

HcdResult recursive_partition(const Graph& g, const SplitterSpec& splitter,
                              const StoppingSpec& stopping, const HcdOptions& opts) {
    if (g.node_count() == 0) throw std::invalid_argument("recursive_partition: empty graph");
    if (opts.min_size < 2)
        throw std::invalid_argument("recursive_partition: min_size must be >= 2");
    Builder b(g, splitter, stopping, opts);
    std::vector<NodeId> all(g.node_count());
    std::iota(all.begin(), all.end(), 0);
    b.build(std::move(all), "", opts.seed);
    b.out.tree.validate(g.node_count());
    b.out.labels = b.out.tree.leaf_labeling(g.node_count());
    return std::move(b.out);
}

KwayResult kway_rsc(const Graph& g, int k, double tau, double tol, std::uint64_t seed) {
    const int n = static_cast<int>(g.node_count());
    if (k < 1 || k > n) throw std::invalid_argument("kway_rsc: k out of range");
    KwayResult out;
    if (k == 1) {
        out.labels.assign.assign(n, 0);
        return out;
    }
    LinearOperator base = regularized_laplacian_op(g, tau);
    LinearOperator op = shifted_operator(base, 1.0);
    auto pairs = lanczos_extreme(op, k, tol, 500, CounterRng::derive(seed, kEmbedSalt));
    out.applies = op.applies();
    out.work = op.work_done();
    Matrix points(n, k);
    for (int j = 0; j < k; ++j) {
        canonicalize_sign(pairs[j].vector);
        for (int i = 0; i < n; ++i) points(i, j) = pairs[j].vector[i];
    }
    // Single seeded k-means pass: the conventional default for a flat
    // spectral-clustering baseline. Restarts stay with the binary splitter,
    // where each run is cheap and robustness matters for the recursion.
    auto km = kmeans(points, k, CounterRng::derive(seed, kClusterSalt), 1);
    out.labels.assign.assign(km.assign.begin(), km.assign.end());
    return out;
}

FittedBlockModel fit_sbm(const Graph& g, const std::vector<std::int32_t>& assign) {
    if (static_cast<std::int64_t>(assign.size()) != g.node_count())
        throw std::invalid_argument("fit_sbm: assignment length mismatch");
    std::int32_t kk = 0;
    for (auto a : assign) {
        if (a < 0) throw std::invalid_argument("fit_sbm: negative community id");
        kk = std::max(kk, a + 1);
    }
    const int K = kk;
    if (K == 0) throw std::invalid_argument("fit_sbm: empty assignment");
    FittedBlockModel out;
    out.sizes.assign(K, 0);
    for (auto a : assign) ++out.sizes[a];
    Matrix counts(K, K);
    for (NodeId i = 0; i < g.node_count(); ++i)
        for (NodeId j : g.neighbors(i)) {
            if (j <= i) continue;
            int u = assign[i], v = assign[j];
            counts(u, v) += 1.0;
            if (u != v) counts(v, u) += 1.0;
        }
    out.B = Matrix(K, K);
    for (int u = 0; u < K; ++u)
        for (int v = 0; v < K; ++v) {
            double pairs = (u == v)
                               ? 0.5 * static_cast<double>(out.sizes[u]) *
                                     static_cast<double>(out.sizes[u] - 1)
                               : static_cast<double>(out.sizes[u]) * static_cast<double>(out.sizes[v]);
            out.B(u, v) = pairs > 0.0 ? counts(u, v) / pairs : 0.0;
        }
    return out;
}

// ---------------------------------------------------------------------------
// hierarchy over pre-formed blocks

namespace {

struct BlockBuilder {
    const Matrix& b;
    const std::vector<std::vector<NodeId>>& members;
    std::vector<std::int64_t> sizes;
    BlockTreeResult out;

    BlockBuilder(const Matrix& bb, const std::vector<std::vector<NodeId>>& mm) : b(bb), members(mm) {
        sizes.reserve(mm.size());
        for (const auto& m : mm) sizes.push_back(static_cast<std::int64_t>(m.size()));
    }

    std::vector<NodeId> merged(const std::vector<int>& blocks) const {
        std::vector<NodeId> all;
        for (int s : blocks) all.insert(all.end(), members[s].begin(), members[s].end());
        std::sort(all.begin(), all.end());
        return all;
    }

    int build(const std::vector<int>& blocks, const BinaryLabel& label) {
        const int idx = static_cast<int>(out.tree.nodes.size());
        out.tree.nodes.push_back({label, -1, -1, merged(blocks)});
        const int k = static_cast<int>(blocks.size());
        if (k == 1) return idx;
        Matrix m(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                m(i, j) = std::sqrt(static_cast<double>(sizes[blocks[i]]) *
                                    static_cast<double>(sizes[blocks[j]])) *
                          b(blocks[i], blocks[j]);
        auto eig = dense_sym_eig(m);
        std::vector<int> rank(k);
        std::iota(rank.begin(), rank.end(), 0);
        std::sort(rank.begin(), rank.end(), [&](int x, int y) {
            double ax = std::abs(eig.values[x]), ay = std::abs(eig.values[y]);
            if (ax != ay) return ax > ay;
            return eig.values[x] > eig.values[y];
        });
        const double scale = std::max(1.0, std::abs(eig.values[rank[0]]));
        if (k >= 3 && std::abs(std::abs(eig.values[rank[1]]) - std::abs(eig.values[rank[2]])) <
                          1e-9 * scale)
            out.non_unique = true;
        std::vector<double> v(k);
        for (int i = 0; i < k; ++i) v[i] = eig.vectors(i, rank[1]);
        canonicalize_sign(v);
        std::vector<int> s0, s1;
        for (int i = 0; i < k; ++i) (v[i] >= 0.0 ? s0 : s1).push_back(blocks[i]);
        if (s0.empty() || s1.empty()) {
            // ill-defined direction (reducible or degenerate block matrix):
            // fall back to a deterministic first-vs-rest split
            out.non_unique = true;
            s0.assign(1, blocks[0]);
            s1.assign(blocks.begin() + 1, blocks.end());
        }
        int left = build(s0, label + "0");
        out.tree.nodes[idx].left = left;
        int right = build(s1, label + "1");
        out.tree.nodes[idx].right = right;
        return idx;
    }
};

}  // namespace

BlockTreeResult tree_from_probability_matrix(const Matrix& p, const Labeling& labels) {
    const auto n = static_cast<NodeId>(labels.assign.size());
    if (n == 0) throw std::invalid_argument("tree_from_probability_matrix: empty labeling");
    const int K = labels.community_count();
    std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(K));
    for (NodeId i = 0; i < n; ++i) {
        const auto c = labels.assign[static_cast<std::size_t>(i)];
        if (c < 0 || c >= K)
            throw std::invalid_argument("tree_from_probability_matrix: bad community id");
        members[static_cast<std::size_t>(c)].push_back(i);
    }
    for (const auto& m : members)
        if (m.empty()) throw std::invalid_argument("tree_from_probability_matrix: empty block");
    Matrix b(K, K);
    if (p.rows == K && p.cols == K) {
        b = p;
    } else if (p.rows == n && p.cols == n) {
        // node-level matrix, constant on community blocks: reduce by block
        // averaging (off-diagonal pairs only, matching a zero-diagonal P)
        for (int s = 0; s < K; ++s)
            for (int t = 0; t < K; ++t) {
                double sum = 0.0, cnt = 0.0;
                for (NodeId i : members[static_cast<std::size_t>(s)])
                    for (NodeId j : members[static_cast<std::size_t>(t)]) {
                        if (i == j) continue;
                        sum += p(static_cast<int>(i), static_cast<int>(j));
                        cnt += 1.0;
                    }
                b(s, t) = cnt > 0.0 ? sum / cnt : 0.0;
            }
    } else {
        throw std::invalid_argument(
            "tree_from_probability_matrix: matrix is neither community-level nor node-level");
    }
    BlockBuilder bb(b, members);
    std::vector<int> all(K);
    std::iota(all.begin(), all.end(), 0);
    bb.build(all, "");
    return std::move(bb.out);
}

}  // namespace hcd
