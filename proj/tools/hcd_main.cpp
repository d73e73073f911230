// Command-line front end: sample graphs from hierarchical block models,
// detect community hierarchies in edge lists, and run the experiment /
// benchmark harnesses from config files.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcd/experiment.hpp"
#include "hcd/graph.hpp"
#include "hcd/json_io.hpp"
#include "hcd/metrics.hpp"

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("short write: " + path);
}

// "-" or empty means stdout.
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!std::cout) throw std::runtime_error("failed writing to stdout");
    } else {
        write_text_file(path, text);
    }
}

struct GenerateArgs {
    std::string config_path;
    std::string out_path = "-";
    std::string truth_path;
    double sweep_value = std::numeric_limits<double>::quiet_NaN();
    std::int64_t seed = -1;
};

int cmd_generate(const GenerateArgs& args) {
    hcd::ExperimentConfig cfg = hcd::parse_experiment_config(read_text_file(args.config_path));
    double value = args.sweep_value;
    if (cfg.sweep == "none") {
        value = 0.0;
    } else if (std::isnan(value)) {
        throw std::invalid_argument("config sweeps over '" + cfg.sweep +
                                    "': pick the instance with --value");
    }
    hcd::ModelInstance inst = hcd::instantiate_model(cfg, value);
    std::uint64_t seed = args.seed >= 0 ? std::uint64_t(args.seed) : cfg.seed;
    hcd::Graph g = hcd::sample_block_model(inst.model, seed);

    std::ostringstream edges;
    hcd::write_edge_list(g, edges);
    emit(args.out_path, edges.str());

    if (!args.truth_path.empty()) {
        hcd::ordered_json truth;
        truth["n"] = inst.model.total_nodes();
        truth["k"] = inst.truth_k;
        truth["seed"] = seed;
        hcd::ordered_json communities = hcd::ordered_json::object();
        std::vector<hcd::BinaryLabel> labels = inst.model.node_labels();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            communities[std::to_string(i)] = labels[i];
        }
        truth["communities"] = communities;
        truth["tree"] = hcd::tree_to_json(inst.truth_tree);
        write_text_file(args.truth_path, hcd::dump_json(truth));
    }
    return 0;
}

struct DetectArgs {
    std::string input_path;
    std::string out_path = "-";
    std::string method = "spec";
    std::string stopper = "nb";
    double tau = 0.1;
    double tol = 1e-8;
    std::int64_t seed = 12345;
    std::int64_t min_size = 4;
    int max_depth = 30;
    bool lcc = false;
    int core = 0;
};

int cmd_detect(const DetectArgs& args) {
    hcd::Graph g = [&] {
        if (args.input_path.empty() || args.input_path == "-") return hcd::from_edge_list(std::cin);
        return hcd::read_edge_list_file(args.input_path);
    }();

    // Optional cleanup, in fixed order: largest component first, then core.
    if (args.lcc) {
        std::vector<hcd::NodeId> keep = hcd::largest_connected_component(g);
        g = hcd::induced_subgraph(g, keep);
    }
    if (args.core > 0) {
        std::vector<hcd::NodeId> keep = hcd::k_core(g, args.core);
        if (keep.empty()) throw std::runtime_error("k-core is empty at k = " + std::to_string(args.core));
        g = hcd::induced_subgraph(g, keep);
    }

    hcd::SplitterSpec splitter;
    if (args.method == "sign") {
        splitter.method = hcd::SplitMethod::SignAdjacency;
    } else if (args.method == "spec") {
        splitter.method = hcd::SplitMethod::RegularizedSpectral;
    } else {
        throw std::invalid_argument("--method must be sign or spec, got '" + args.method + "'");
    }
    splitter.tau = args.tau;

    hcd::HcdOptions opts;
    opts.seed = std::uint64_t(args.seed);
    opts.tol = args.tol;
    opts.min_size = args.min_size;
    opts.max_depth = args.max_depth;

    hcd::HcdResult result =
        hcd::recursive_partition(g, splitter, hcd::parse_stopper(args.stopper), opts);
    emit(args.out_path, hcd::dump_json(hcd::result_to_json(result, g.node_ids())));
    return 0;
}

struct ExperimentArgs {
    std::string config_path;
    std::string csv_path = "-";
    std::string summary_path;
};

int cmd_experiment(const ExperimentArgs& args) {
    hcd::ExperimentConfig cfg = hcd::parse_experiment_config(read_text_file(args.config_path));
    hcd::ExperimentResult result = hcd::run_experiment(cfg);
    emit(args.csv_path, result.csv);
    if (!args.summary_path.empty()) {
        write_text_file(args.summary_path, hcd::dump_json(result.summary));
    }
    return 0;
}

struct BenchArgs {
    std::int64_t n = 3200;
    std::vector<int> k_values = {4, 16, 64};
    double degree = 35.0;
    double ratio = 0.15;
    int reps = 3;
    std::int64_t seed = 12345;
    std::string csv_path = "-";
};

int cmd_bench(const BenchArgs& args) {
    hcd::BenchResult result =
        hcd::run_bench(args.n, args.k_values, args.degree, args.ratio, args.reps,
                       std::uint64_t(args.seed));
    emit(args.csv_path, result.csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical community detection by recursive spectral bi-partitioning"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Sample a graph from a configured block model");
    generate->add_option("-c,--config", gen.config_path, "Model/experiment config file")->required();
    generate->add_option("-o,--out", gen.out_path, "Edge list output path ('-' = stdout)");
    generate->add_option("--truth", gen.truth_path, "Also write ground-truth JSON here");
    generate->add_option("--value", gen.sweep_value, "Sweep value selecting the model instance");
    generate->add_option("--seed", gen.seed, "Override the config seed");

    DetectArgs det;
    CLI::App* detect = app.add_subcommand("detect", "Detect a community hierarchy in an edge list");
    detect->add_option("-i,--input", det.input_path, "Edge list path ('-' = stdin)");
    detect->add_option("-o,--out", det.out_path, "Result JSON path ('-' = stdout)");
    detect->add_option("--method", det.method, "Splitter: sign | spec (default spec)");
    detect->add_option("--stopper", det.stopper, "Stopping rule: nb | none | fixed:<D> | minsize:<S>");
    detect->add_option("--tau", det.tau, "Regularization weight for spec");
    detect->add_option("--tol", det.tol, "Eigensolver residual tolerance");
    detect->add_option("--seed", det.seed, "Random seed");
    detect->add_option("--min-size", det.min_size, "Never split communities smaller than this");
    detect->add_option("--max-depth", det.max_depth, "Maximum hierarchy depth");
    detect->add_flag("--lcc", det.lcc, "Restrict to the largest connected component first");
    detect->add_option("--core", det.core, "Then restrict to the k-core at this k");

    ExperimentArgs exp;
    CLI::App* experiment = app.add_subcommand("experiment", "Run a configured experiment");
    experiment->add_option("-c,--config", exp.config_path, "Experiment config file")->required();
    experiment->add_option("--csv", exp.csv_path, "Per-replication CSV path ('-' = stdout)");
    experiment->add_option("--summary", exp.summary_path, "Summary JSON path");

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Time hierarchical vs flat detection");
    bench_cmd->add_option("--n", bench.n, "Nodes per sampled graph");
    bench_cmd->add_option("--k", bench.k_values, "Community counts to benchmark");
    bench_cmd->add_option("--degree", bench.degree, "Target average degree");
    bench_cmd->add_option("--ratio", bench.ratio, "Between/within edge ratio");
    bench_cmd->add_option("--reps", bench.reps, "Replications per community count");
    bench_cmd->add_option("--seed", bench.seed, "Random seed");
    bench_cmd->add_option("--csv", bench.csv_path, "Timing CSV path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) return cmd_generate(gen);
        if (*detect) return cmd_detect(det);
        if (*experiment) return cmd_experiment(exp);
        if (*bench_cmd) return cmd_bench(bench);
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
