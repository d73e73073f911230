// Python bindings for the core operations: model construction and sampling,
// hierarchy detection, the flat baseline, and the comparison metrics.
// Structured results cross the boundary as JSON text; the Python package
// turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hcd/experiment.hpp"
#include "hcd/graph.hpp"
#include "hcd/json_io.hpp"
#include "hcd/metrics.hpp"

namespace py = pybind11;

namespace {

hcd::ProbProfile profile_of(const std::string& name) {
    if (name == "geometric") return hcd::ProbProfile::Geometric;
    if (name == "arithmetic") return hcd::ProbProfile::Arithmetic;
    if (name == "flat") return hcd::ProbProfile::Flat;
    throw std::invalid_argument("profile must be geometric, arithmetic or flat, got '" + name + "'");
}

hcd::Graph graph_of(std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
    std::vector<std::pair<hcd::NodeId, hcd::NodeId>> converted;
    converted.reserve(edges.size());
    for (auto [u, v] : edges) {
        converted.emplace_back(hcd::NodeId(u), hcd::NodeId(v));
    }
    return hcd::Graph::from_edges(hcd::NodeId(n), converted);
}

std::vector<std::pair<std::int64_t, std::int64_t>> edges_of(const hcd::Graph& g) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(std::size_t(g.nnz() / 2));
    for (hcd::NodeId u = 0; u < g.node_count(); ++u) {
        for (hcd::NodeId v : g.neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

hcd::BtsbmParams params_of(int depth, const std::vector<std::int64_t>& sizes,
                           const std::vector<double>& probs) {
    hcd::BtsbmParams params{depth, sizes, probs};
    params.validate();
    return params;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hierarchical community detection: recursive spectral bi-partitioning over "
              "binary-tree block models";

    m.def(
        "derive_params",
        [](std::int64_t n, int k, double degree, double ratio, const std::string& profile) {
            hcd::BtsbmParams p = hcd::derive_model_params(n, k, degree, ratio, profile_of(profile));
            return py::make_tuple(p.depth, p.sizes, p.probs);
        },
        py::arg("n"), py::arg("k"), py::arg("degree"), py::arg("ratio"),
        py::arg("profile") = "geometric",
        "Solve for balanced model parameters hitting an average degree and a "
        "between/within edge ratio; returns (depth, sizes, probs).");

    m.def(
        "sample",
        [](int depth, const std::vector<std::int64_t>& sizes, const std::vector<double>& probs,
           std::uint64_t seed) {
            hcd::Graph g = hcd::sample_adjacency(params_of(depth, sizes, probs), seed);
            return edges_of(g);
        },
        py::arg("depth"), py::arg("sizes"), py::arg("probs"), py::arg("seed") = 12345,
        "Sample an undirected graph from the block model; returns edge pairs.");

    m.def(
        "truth_labels",
        [](int depth, const std::vector<std::int64_t>& sizes) {
            std::vector<double> probs(std::size_t(depth) + 1, 0.5);
            hcd::BlockModel model = hcd::block_model_of(params_of(depth, sizes, probs));
            return model.node_community();
        },
        py::arg("depth"), py::arg("sizes"),
        "Ground-truth community index per node, blocks contiguous in label order.");

    m.def(
        "analytic_spectrum",
        [](int depth, const std::vector<std::int64_t>& sizes, const std::vector<double>& probs) {
            return hcd::analytic_population_spectrum(params_of(depth, sizes, probs));
        },
        py::arg("depth"), py::arg("sizes"), py::arg("probs"),
        "All eigenvalues of the expected adjacency (balanced models), descending.");

    m.def(
        "detect_json",
        [](std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges,
           const std::string& method, const std::string& stopper, double tau, double tol,
           std::uint64_t seed, std::int64_t min_size, int max_depth) {
            hcd::Graph g = graph_of(n, edges);
            hcd::SplitterSpec splitter;
            if (method == "sign") {
                splitter.method = hcd::SplitMethod::SignAdjacency;
            } else if (method == "spec") {
                splitter.method = hcd::SplitMethod::RegularizedSpectral;
            } else {
                throw std::invalid_argument("method must be sign or spec, got '" + method + "'");
            }
            splitter.tau = tau;
            hcd::HcdOptions opts;
            opts.seed = seed;
            opts.tol = tol;
            opts.min_size = min_size;
            opts.max_depth = max_depth;
            hcd::HcdResult result =
                hcd::recursive_partition(g, splitter, hcd::parse_stopper(stopper), opts);
            return hcd::dump_json(hcd::result_to_json(result));
        },
        py::arg("n"), py::arg("edges"), py::arg("method") = "spec", py::arg("stopper") = "nb",
        py::arg("tau") = 0.1, py::arg("tol") = 1e-8, py::arg("seed") = 12345,
        py::arg("min_size") = 4, py::arg("max_depth") = 30,
        "Recursive bi-partitioning; returns the full result as JSON text.");

    m.def(
        "kway",
        [](std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges, int k,
           double tau, double tol, std::uint64_t seed) {
            hcd::KwayResult r = hcd::kway_rsc(graph_of(n, edges), k, tau, tol, seed);
            return r.labels.assign;
        },
        py::arg("n"), py::arg("edges"), py::arg("k"), py::arg("tau") = 0.1, py::arg("tol") = 1e-8,
        py::arg("seed") = 12345, "Flat regularized spectral clustering; returns labels per node.");

    m.def(
        "nmi",
        [](const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
            return hcd::nmi(a, b);
        },
        py::arg("a"), py::arg("b"), "Normalized mutual information of two labelings.");

    m.def(
        "similarity_error",
        [](const std::string& est_tree_json, const std::string& truth_tree_json) {
            hcd::CommunityTree est = hcd::tree_from_json(hcd::ordered_json::parse(est_tree_json));
            hcd::CommunityTree truth = hcd::tree_from_json(hcd::ordered_json::parse(truth_tree_json));
            return hcd::tree_similarity_error(est, truth);
        },
        py::arg("est_tree_json"), py::arg("truth_tree_json"),
        "Normalized squared error between the pairwise similarity profiles of two "
        "hierarchies (JSON tree form).");

    m.def(
        "level_accuracy",
        [](const std::string& est_tree_json, const std::string& truth_tree_json, int q) {
            hcd::CommunityTree est = hcd::tree_from_json(hcd::ordered_json::parse(est_tree_json));
            hcd::CommunityTree truth = hcd::tree_from_json(hcd::ordered_json::parse(truth_tree_json));
            return hcd::level_accuracy(est, truth, q);
        },
        py::arg("est_tree_json"), py::arg("truth_tree_json"), py::arg("q"),
        "Best-matching accuracy of the estimated hierarchy truncated at level q.");

    m.def(
        "run_experiment_config",
        [](const std::string& config_text) {
            hcd::ExperimentResult result =
                hcd::run_experiment(hcd::parse_experiment_config(config_text));
            return py::make_tuple(result.csv, hcd::dump_json(result.summary));
        },
        py::arg("config_text"),
        "Run a config-driven experiment; returns (csv_text, summary_json_text).");
}
