#include "hcd/btsbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hcd/rng.hpp"

namespace hcd {

std::int64_t BtsbmParams::total_nodes() const {
    return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
}

bool BtsbmParams::balanced() const {
    return std::all_of(sizes.begin(), sizes.end(),
                       [&](std::int64_t s) { return s == sizes.front(); });
}

bool BtsbmParams::assortative() const {
    for (std::size_t t = 0; t + 1 < probs.size(); ++t)
        if (probs[t] < probs[t + 1]) return false;
    return probs.front() > probs.back();
}

bool BtsbmParams::disassortative() const {
    for (std::size_t t = 0; t + 1 < probs.size(); ++t)
        if (probs[t] > probs[t + 1]) return false;
    return probs.front() < probs.back();
}

void BtsbmParams::validate() const {
    if (depth < 1 || depth > 20) throw std::invalid_argument("BtsbmParams: depth must be in [1, 20]");
    if (static_cast<int>(sizes.size()) != community_count())
        throw std::invalid_argument("BtsbmParams: sizes must have one entry per community");
    for (auto s : sizes)
        if (s < 1) throw std::invalid_argument("BtsbmParams: community sizes must be >= 1");
    if (static_cast<int>(probs.size()) != depth + 1)
        throw std::invalid_argument("BtsbmParams: probs must have depth+1 entries");
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("BtsbmParams: probabilities must lie in [0, 1]");
}

BtsbmParams BtsbmParams::balanced_model(int depth, std::int64_t community_size,
                                        std::vector<double> probs) {
    BtsbmParams p;
    p.depth = depth;
    p.probs = std::move(probs);
    if (depth >= 1 && depth <= 20)
        p.sizes.assign(static_cast<std::size_t>(1) << depth, community_size);
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------

std::int64_t BlockModel::total_nodes() const {
    return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
}

void BlockModel::validate() const {
    const int K = community_count();
    if (K < 1) throw std::invalid_argument("BlockModel: no communities");
    if (static_cast<int>(sizes.size()) != K)
        throw std::invalid_argument("BlockModel: sizes/labels length mismatch");
    for (auto s : sizes)
        if (s < 1) throw std::invalid_argument("BlockModel: community sizes must be >= 1");
    if (B.rows != K || B.cols != K)
        throw std::invalid_argument("BlockModel: B must be K x K");
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) {
            if (!(B(i, j) >= 0.0 && B(i, j) <= 1.0))
                throw std::invalid_argument("BlockModel: probabilities must lie in [0, 1]");
            if (B(i, j) != B(j, i)) throw std::invalid_argument("BlockModel: B must be symmetric");
        }
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < K; ++i) {
        if (!is_binary_label(sorted[i]))
            throw std::invalid_argument("BlockModel: label is not a binary string: " + sorted[i]);
        if (i + 1 < K && sorted[i + 1].compare(0, sorted[i].size(), sorted[i]) == 0)
            throw std::invalid_argument("BlockModel: labels are not prefix-free: " + sorted[i]);
    }
}

std::vector<int> BlockModel::node_community() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(total_nodes()));
    for (int c = 0; c < community_count(); ++c)
        out.insert(out.end(), static_cast<std::size_t>(sizes[c]), c);
    return out;
}

std::vector<BinaryLabel> BlockModel::node_labels() const {
    std::vector<BinaryLabel> out;
    out.reserve(static_cast<std::size_t>(total_nodes()));
    for (int c = 0; c < community_count(); ++c)
        out.insert(out.end(), static_cast<std::size_t>(sizes[c]), labels[c]);
    return out;
}

CommunityTree BlockModel::tree() const {
    std::vector<std::pair<BinaryLabel, std::vector<NodeId>>> leaves;
    std::int64_t at = 0;
    for (int c = 0; c < community_count(); ++c) {
        std::vector<NodeId> members(static_cast<std::size_t>(sizes[c]));
        std::iota(members.begin(), members.end(), static_cast<NodeId>(at));
        leaves.emplace_back(labels[c], std::move(members));
        at += sizes[c];
    }
    return tree_from_leaf_members(std::move(leaves));
}

Labeling BlockModel::labeling() const {
    Labeling out;
    auto comm = node_community();
    out.assign.assign(comm.begin(), comm.end());
    out.names = labels;
    return out;
}

BlockModel block_model_of(const BtsbmParams& params) {
    params.validate();
    BlockModel m;
    const int K = params.community_count();
    m.labels.reserve(K);
    for (int c = 0; c < K; ++c) m.labels.push_back(index_to_label(c, params.depth));
    m.sizes = params.sizes;
    m.B = block_matrix(params);
    m.validate();
    return m;
}

BlockModel merge_communities(const BtsbmParams& params, const std::vector<BinaryLabel>& leaves) {
    params.validate();
    BlockModel m;
    m.labels = leaves;
    std::sort(m.labels.begin(), m.labels.end());
    const int K = static_cast<int>(m.labels.size());
    m.sizes.assign(K, 0);
    // every merged leaf must be a genuine ancestor-or-leaf of the full tree
    for (int c = 0; c < K; ++c)
        if (m.labels[c].empty() || static_cast<int>(m.labels[c].size()) > params.depth ||
            !is_binary_label(m.labels[c]))
            throw std::invalid_argument("merge_communities: bad leaf label '" + m.labels[c] + "'");
    std::int64_t covered = 0;
    for (int c = 0; c < K; ++c) {
        const auto& lab = m.labels[c];
        const int free_bits = params.depth - static_cast<int>(lab.size());
        const int base = label_to_index(lab) << free_bits;
        for (int t = 0; t < (1 << free_bits); ++t) m.sizes[c] += params.sizes[base + t];
        covered += std::int64_t{1} << free_bits;
    }
    if (covered != params.community_count())
        throw std::invalid_argument("merge_communities: leaves do not cover the tree exactly");
    m.B = Matrix(K, K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) m.B(i, j) = connection_prob(params, m.labels[i], m.labels[j]);
    m.validate();
    return m;
}

double connection_prob(const BtsbmParams& params, const BinaryLabel& x, const BinaryLabel& y) {
    return params.probs[static_cast<std::size_t>(tree_distance(x, y, params.depth))];
}

Matrix block_matrix(const BtsbmParams& params) {
    params.validate();
    const int K = params.community_count();
    Matrix b(K, K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j)
            b(i, j) = connection_prob(params, index_to_label(i, params.depth),
                                      index_to_label(j, params.depth));
    return b;
}

Matrix population_matrix_tilde(const BtsbmParams& params) {
    params.validate();
    const auto n = params.total_nodes();
    if (n > 20000) throw std::invalid_argument("population_matrix_tilde: model too large");
    Matrix b = block_matrix(params);
    BlockModel flat = block_model_of(params);
    auto comm = flat.node_community();
    Matrix p(static_cast<int>(n), static_cast<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = b(comm[i], comm[j]);
    return p;
}

Matrix population_matrix(const BtsbmParams& params) {
    Matrix p = population_matrix_tilde(params);
    for (int i = 0; i < p.rows; ++i) p(i, i) -= params.probs[0];
    return p;
}

// ---------------------------------------------------------------------------

Graph sample_block_model(const BlockModel& model, std::uint64_t seed) {
    model.validate();
    const std::int64_t n = model.total_nodes();
    if (n > std::numeric_limits<NodeId>::max())
        throw std::invalid_argument("sample_block_model: model too large");
    const int K = model.community_count();
    std::vector<std::int64_t> start(K + 1, 0);
    for (int c = 0; c < K; ++c) start[c + 1] = start[c] + model.sizes[c];
    auto comm = model.node_community();
    CounterRng rng(CounterRng::derive(seed, 0x5A3D1EULL));
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::int64_t i = 0; i < n; ++i) {
        const int ci = comm[static_cast<std::size_t>(i)];
        for (int cj = ci; cj < K; ++cj) {
            const std::int64_t lo = std::max(start[cj], i + 1);
            const std::int64_t hi = start[cj + 1];
            if (lo >= hi) continue;
            const double p = model.B(ci, cj);
            if (p <= 0.0) continue;
            if (p >= 1.0) {
                for (std::int64_t j = lo; j < hi; ++j)
                    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
                continue;
            }
            if (p < 0.25) {
                // geometric skipping: draw the gap to the next success
                const double lq = std::log1p(-p);
                double jd = static_cast<double>(lo) - 1.0;
                for (;;) {
                    jd += 1.0 + std::floor(std::log1p(-rng.uniform()) / lq);
                    if (jd >= static_cast<double>(hi)) break;
                    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(jd));
                }
            } else {
                for (std::int64_t j = lo; j < hi; ++j)
                    if (rng.uniform() < p)
                        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
            }
        }
    }
    return Graph::from_sorted_edges(static_cast<NodeId>(n), edges);
}

Graph sample_adjacency(const BtsbmParams& params, std::uint64_t seed) {
    return sample_block_model(block_model_of(params), seed);
}

// ---------------------------------------------------------------------------

std::vector<double> analytic_eigenvalue_levels(const BtsbmParams& params) {
    params.validate();
    if (!params.balanced())
        throw std::invalid_argument("analytic_eigenvalue_levels: model must be balanced");
    const int d = params.depth;
    const double m = static_cast<double>(params.sizes.front());
    const auto& p = params.probs;
    std::vector<double> levels(d + 1);
    double full = p[0];
    for (int r = 1; r <= d; ++r) full += std::ldexp(p[r], r - 1);
    levels[0] = m * full;
    for (int q = 1; q <= d; ++q) {
        double v = p[0];
        for (int r = 1; r <= d - q; ++r) v += std::ldexp(p[r], r - 1);
        v -= std::ldexp(p[d - q + 1], d - q);
        levels[q] = m * v;
    }
    return levels;
}

std::vector<std::int64_t> analytic_level_multiplicities(int depth) {
    if (depth < 1) throw std::invalid_argument("analytic_level_multiplicities: depth must be >= 1");
    std::vector<std::int64_t> mult(depth + 1);
    mult[0] = 1;
    for (int q = 1; q <= depth; ++q) mult[q] = std::int64_t{1} << (q - 1);
    return mult;
}

std::vector<double> analytic_population_spectrum(const BtsbmParams& params) {
    auto levels = analytic_eigenvalue_levels(params);
    auto mult = analytic_level_multiplicities(params.depth);
    std::vector<double> spec;
    spec.reserve(static_cast<std::size_t>(params.total_nodes()));
    for (int q = 0; q <= params.depth; ++q)
        spec.insert(spec.end(), static_cast<std::size_t>(mult[q]), levels[q]);
    spec.resize(static_cast<std::size_t>(params.total_nodes()), 0.0);
    std::sort(spec.begin(), spec.end(), std::greater<>());
    return spec;
}

std::vector<double> sorted_by_magnitude(std::vector<double> values) {
    std::sort(values.begin(), values.end(), [](double x, double y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
        return x > y;
    });
    return values;
}

Matrix hadamard_eigenbasis(int depth) {
    if (depth < 1 || depth > 12) throw std::invalid_argument("hadamard_eigenbasis: depth out of range");
    const int K = 1 << depth;
    const double scale = 1.0 / std::sqrt(static_cast<double>(K));
    Matrix u(K, K);
    for (int x = 0; x < K; ++x)
        for (int y = 0; y < K; ++y)
            u(x, y) = (__builtin_popcount(static_cast<unsigned>(x & y)) & 1) ? -scale : scale;
    return u;
}

std::vector<double> hadamard_slot_values(const BtsbmParams& params) {
    params.validate();
    const int d = params.depth;
    const int K = params.community_count();
    const auto& p = params.probs;
    std::vector<double> slots(K);
    double full = p[0];
    for (int r = 1; r <= d; ++r) full += std::ldexp(p[r], r - 1);
    slots[0] = full;
    for (int j = 1; j < K; ++j) {
        const int q = d - __builtin_ctz(static_cast<unsigned>(j));
        double v = p[0];
        for (int r = 1; r <= d - q; ++r) v += std::ldexp(p[r], r - 1);
        v -= std::ldexp(p[d - q + 1], d - q);
        slots[j] = v;
    }
    return slots;
}

double analytic_second_eigengap(const BtsbmParams& params) {
    params.validate();
    if (!params.balanced())
        throw std::invalid_argument("analytic_second_eigengap: model must be balanced");
    const double n = static_cast<double>(params.total_nodes());
    const auto& p = params.probs;
    const int d = params.depth;
    if (params.assortative()) return n * std::min(p[d], (p[d - 1] - p[d]) / 2.0);
    if (params.disassortative()) return n * (p[d] - p[d - 1]) / 2.0;
    throw std::invalid_argument(
        "analytic_second_eigengap: probability profile is neither assortative nor dis-assortative");
}

std::vector<double> analytic_second_eigvec(const BtsbmParams& params) {
    params.validate();
    if (!params.balanced())
        throw std::invalid_argument("analytic_second_eigvec: model must be balanced");
    const std::int64_t n = params.total_nodes();
    std::vector<double> v(static_cast<std::size_t>(n));
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (2 * i < n) ? a : -a;
    return v;
}

}  // namespace hcd
