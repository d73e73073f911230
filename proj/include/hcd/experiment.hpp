#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcd/btsbm.hpp"
#include "hcd/hcd.hpp"
#include "hcd/json_io.hpp"

namespace hcd {

// Shape of the probability decay across tree levels, parameterized so a
// target between/within edge ratio can be solved for:
//   Geometric:  p_r = p_0 * beta^r
//   Arithmetic: p_r = p_0 * (1 - r * t)
//   Flat:       p_r = p_0 * a for all r >= 1 (no hierarchy between blocks)
enum class ProbProfile { Geometric, Arithmetic, Flat };

// Solve for the balanced model with K communities over n nodes whose
// expected average degree and between/within edge-count ratio hit the
// targets (profile parameter found by bisection to 1e-10, then the overall
// scale from the degree). Throws with the attainable range when the targets
// are infeasible. K must be a power of two dividing n with n >= 2K.
BtsbmParams derive_model_params(std::int64_t n, int K, double avg_degree, double out_in_ratio,
                                ProbProfile profile);

// Closed-form checks used both here and in tests.
double expected_average_degree(const BtsbmParams& params);
double expected_out_in_ratio(const BtsbmParams& params);

// ---------------------------------------------------------------------------
// declarative experiment configuration (flat key = value text format)

struct ModelSpec {
    enum class Kind { Balanced, Explicit, UnbalancedA, UnbalancedB };
    Kind kind = Kind::Balanced;
    // Balanced family (k/degree may be overridden by the sweep)
    std::int64_t n = 0;
    int k = 0;
    double degree = 0.0;
    double out_in_ratio = 0.0;
    ProbProfile profile = ProbProfile::Geometric;
    // Explicit parameters
    BtsbmParams explicit_params;
};

struct ExperimentConfig {
    ModelSpec model;
    int replications = 20;
    std::uint64_t seed = 12345;
    std::vector<std::string> methods;  // subset of {hcd_sign, hcd_spec, kway_rsc}
    std::string stopper = "nb";        // nb | none | fixed:<D> | minsize:<S>
    std::string sweep = "none";        // none | k | degree
    std::vector<double> sweep_values;
    std::vector<std::string> metrics;  // subset of the five metric names + k_hat
    double tau = 0.1;
    std::string kway_k = "auto";  // auto (leaf count of hcd_spec) | truth | integer
    double tol = 1e-8;
    std::int64_t min_size = 4;
    int max_depth = 30;
};

// Parse the flat text format (see README): `key = value` lines, `[v1, v2]`
// arrays, `#` comments. Unknown keys and malformed values raise errors
// naming the line.
ExperimentConfig parse_experiment_config(const std::string& text);

// One fully instantiated model (a sweep point): sampling distribution plus
// ground truth in every form the metrics need.
struct ModelInstance {
    BlockModel model;
    std::vector<std::int32_t> truth_assign;
    CommunityTree truth_tree;
    Matrix truth_b;
    int truth_k = 0;
    // Reference for the edge-probability error. For merged-truth models the
    // generator is finer than the evaluation communities, so the probability
    // matrix is compared at generator granularity.
    std::vector<std::int32_t> prob_assign;
    Matrix prob_b;
};
ModelInstance instantiate_model(const ExperimentConfig& cfg, double sweep_value);

StoppingSpec parse_stopper(const std::string& text);

// ---------------------------------------------------------------------------
// harness

struct ResultRow {
    std::string method;
    std::string sweep;
    double sweep_value = 0.0;
    int replication = 0;
    std::uint64_t seed = 0;
    double nmi = 0.0;
    double similarity_error = 0.0;
    double level1_accuracy = 0.0;
    double level2_accuracy = 0.0;
    double phat_error = 0.0;
    double k_hat = 0.0;
    double wall_ms = 0.0;
    std::string error;  // empty on success
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::string csv;       // fixed schema, deterministic except the wall_ms column
    ordered_json summary;  // per-(method, sweep value) means and standard errors
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// CSV text for a row list (header + one line per row, %.12g doubles, NaN for
// failed metrics).
std::string rows_to_csv(const std::vector<ResultRow>& rows);

// ---------------------------------------------------------------------------
// complexity benchmark: hierarchical detection vs flat k-way on the same
// samples, with edge-visit work counters and the per-level accounting check.

struct BenchRow {
    int k = 0;
    int replication = 0;
    std::uint64_t seed = 0;
    std::int64_t n = 0;
    std::int64_t edges = 0;
    double hcd_ms = 0.0;
    int hcd_k_hat = 0;
    std::int64_t hcd_applies = 0;
    std::int64_t hcd_work = 0;  // splitter edge-visit units
    std::int64_t hcd_stopper_applies = 0;
    std::int64_t hcd_stopper_work = 0;
    double kway_ms = 0.0;
    std::int64_t kway_applies = 0;
    std::int64_t kway_work = 0;
    bool levels_ok = false;  // per-level nnz sums bounded by the full graph
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::string csv;
};

BenchResult run_bench(std::int64_t n, const std::vector<int>& k_values, double degree,
                      double out_in_ratio, int reps, std::uint64_t seed);

}  // namespace hcd
