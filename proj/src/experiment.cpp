#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcd/experiment.hpp"
#include "hcd/metrics.hpp"
#include "hcd/rng.hpp"

namespace hcd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Error text destined for a CSV cell: no commas, quotes or line breaks.
std::string sanitize_for_csv(std::string text) {
    for (char& c : text) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r' || c == '"') c = ' ';
    }
    return text;
}

double now_ms_since(std::chrono::steady_clock::time_point start) {
    auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(end - start).count();
}

bool wants(const std::vector<std::string>& metrics, const char* name) {
    return std::find(metrics.begin(), metrics.end(), name) != metrics.end();
}

// What a detection method hands to the metrics.
struct MethodOutput {
    std::vector<std::int32_t> assign;
    CommunityTree tree;
    int k_hat = 0;
};

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "method,sweep,sweep_value,replication,seed,nmi,similarity_error,level1_accuracy,"
           "level2_accuracy,phat_error,k_hat,wall_ms,error\n";
    for (const ResultRow& r : rows) {
        out << r.method << ',' << r.sweep << ',' << fmt_double(r.sweep_value) << ',' << r.replication
            << ',' << r.seed << ',' << fmt_double(r.nmi) << ',' << fmt_double(r.similarity_error)
            << ',' << fmt_double(r.level1_accuracy) << ',' << fmt_double(r.level2_accuracy) << ','
            << fmt_double(r.phat_error) << ',' << fmt_double(r.k_hat) << ',' << fmt_double(r.wall_ms)
            << ',' << sanitize_for_csv(r.error) << '\n';
    }
    return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult out;
    StoppingSpec stopper = parse_stopper(cfg.stopper);
    std::vector<double> sweep_values = cfg.sweep == "none" ? std::vector<double>{0.0} : cfg.sweep_values;

    for (std::size_t si = 0; si < sweep_values.size(); ++si) {
        double sweep_value = sweep_values[si];
        ModelInstance inst = instantiate_model(cfg, sweep_value);
        int truth_depth = inst.truth_tree.depth();

        for (int rep = 0; rep < cfg.replications; ++rep) {
            std::uint64_t rep_seed =
                CounterRng::derive(cfg.seed, std::uint64_t(si) * 1000003ULL + std::uint64_t(rep));
            Graph g = sample_block_model(inst.model, rep_seed);

            HcdOptions opts;
            opts.seed = rep_seed;
            opts.tol = cfg.tol;
            opts.min_size = cfg.min_size;
            opts.max_depth = cfg.max_depth;

            // hcd_spec is run at most once per replication; the same result
            // serves its own row and, under kway_k = auto, the baseline's
            // community count.
            std::optional<HcdResult> spec_result;
            std::string spec_error;
            double spec_ms = kNaN;
            auto ensure_spec = [&]() -> const HcdResult* {
                if (!spec_result && spec_error.empty()) {
                    auto t0 = std::chrono::steady_clock::now();
                    try {
                        SplitterSpec splitter{SplitMethod::RegularizedSpectral, cfg.tau};
                        spec_result = recursive_partition(g, splitter, stopper, opts);
                        spec_ms = now_ms_since(t0);
                    } catch (const std::exception& e) {
                        spec_error = e.what();
                    }
                }
                return spec_result ? &*spec_result : nullptr;
            };

            for (const std::string& method : cfg.methods) {
                ResultRow row;
                row.method = method;
                row.sweep = cfg.sweep;
                row.sweep_value = sweep_value;
                row.replication = rep;
                row.seed = rep_seed;
                row.nmi = row.similarity_error = row.level1_accuracy = row.level2_accuracy =
                    row.phat_error = row.k_hat = row.wall_ms = kNaN;

                MethodOutput got;
                Matrix est_b;
                bool ran = false;
                try {
                    if (method == "hcd_sign") {
                        auto t0 = std::chrono::steady_clock::now();
                        SplitterSpec splitter{SplitMethod::SignAdjacency, cfg.tau};
                        HcdResult r = recursive_partition(g, splitter, stopper, opts);
                        row.wall_ms = now_ms_since(t0);
                        got.assign = r.labels.assign;
                        got.tree = std::move(r.tree);
                        got.k_hat = int(got.tree.leaf_count());
                    } else if (method == "hcd_spec") {
                        const HcdResult* r = ensure_spec();
                        if (!r) throw std::runtime_error(spec_error);
                        row.wall_ms = spec_ms;
                        got.assign = r->labels.assign;
                        got.tree = r->tree;
                        got.k_hat = int(got.tree.leaf_count());
                    } else {  // kway_rsc
                        int k = 0;
                        if (cfg.kway_k == "truth") {
                            k = inst.truth_k;
                        } else if (cfg.kway_k == "auto") {
                            const HcdResult* r = ensure_spec();
                            if (!r) throw std::runtime_error("community count from hcd_spec failed: " + spec_error);
                            k = int(r->tree.leaf_count());
                        } else {
                            k = std::stoi(cfg.kway_k);
                        }
                        auto t0 = std::chrono::steady_clock::now();
                        KwayResult kr = kway_rsc(g, k, cfg.tau, cfg.tol, rep_seed);
                        FittedBlockModel fit = fit_sbm(g, kr.labels.assign);
                        BlockTreeResult bt = tree_from_probability_matrix(fit.B, kr.labels);
                        row.wall_ms = now_ms_since(t0);
                        got.assign = kr.labels.assign;
                        got.tree = std::move(bt.tree);
                        got.k_hat = k;
                        est_b = std::move(fit.B);
                    }
                    ran = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }

                if (ran) {
                    auto metric = [&](const char* name, auto&& compute) -> double {
                        if (!wants(cfg.metrics, name)) return kNaN;
                        try {
                            return compute();
                        } catch (const std::exception& e) {
                            if (!row.error.empty()) row.error += "; ";
                            row.error += std::string(name) + ": " + e.what();
                            return kNaN;
                        }
                    };
                    row.nmi = metric("nmi", [&] { return nmi(got.assign, inst.truth_assign); });
                    row.similarity_error = metric("similarity_error", [&] {
                        return tree_similarity_error(got.tree, inst.truth_tree);
                    });
                    row.level1_accuracy = metric("level1_accuracy", [&]() -> double {
                        if (truth_depth < 1) throw std::runtime_error("reference tree has depth 0");
                        return level_accuracy(got.tree, inst.truth_tree, 1);
                    });
                    row.level2_accuracy = metric("level2_accuracy", [&]() -> double {
                        if (truth_depth < 2) throw std::runtime_error("reference tree is shallower than 2");
                        return level_accuracy(got.tree, inst.truth_tree, 2);
                    });
                    row.phat_error = metric("phat_error", [&] {
                        if (est_b.rows == 0) est_b = fit_sbm(g, got.assign).B;
                        return prob_matrix_error(got.assign, est_b, inst.prob_assign, inst.prob_b);
                    });
                    row.k_hat = metric("k_hat", [&] { return double(got.k_hat); });
                }
                out.rows.push_back(std::move(row));
            }
        }
    }

    out.csv = rows_to_csv(out.rows);

    // Per-(method, sweep value) summary: mean and standard error of each
    // requested metric over the replications that produced a value.
    ordered_json summary;
    summary["sweep"] = cfg.sweep;
    summary["replications"] = cfg.replications;
    summary["seed"] = cfg.seed;
    summary["methods"] = cfg.methods;
    summary["metrics"] = cfg.metrics;
    ordered_json cells = ordered_json::array();
    for (double sweep_value : sweep_values) {
        for (const std::string& method : cfg.methods) {
            ordered_json cell;
            cell["method"] = method;
            cell["sweep_value"] = sweep_value;
            int failures = 0;
            struct Acc {
                const char* name;
                double ResultRow::* field;
            };
            const Acc accs[] = {
                {"nmi", &ResultRow::nmi},
                {"similarity_error", &ResultRow::similarity_error},
                {"level1_accuracy", &ResultRow::level1_accuracy},
                {"level2_accuracy", &ResultRow::level2_accuracy},
                {"phat_error", &ResultRow::phat_error},
                {"k_hat", &ResultRow::k_hat},
            };
            ordered_json stats;
            for (const Acc& acc : accs) {
                if (!wants(cfg.metrics, acc.name)) continue;
                std::vector<double> values;
                for (const ResultRow& r : out.rows) {
                    if (r.method != method || r.sweep_value != sweep_value) continue;
                    double v = r.*(acc.field);
                    if (!std::isnan(v)) values.push_back(v);
                }
                ordered_json entry;
                entry["count"] = values.size();
                if (values.empty()) {
                    entry["mean"] = nullptr;
                    entry["stderr"] = nullptr;
                } else {
                    double mean = 0.0;
                    for (double v : values) mean += v;
                    mean /= double(values.size());
                    double var = 0.0;
                    for (double v : values) var += (v - mean) * (v - mean);
                    double se = values.size() > 1
                                    ? std::sqrt(var / double(values.size() - 1) / double(values.size()))
                                    : 0.0;
                    entry["mean"] = mean;
                    entry["stderr"] = se;
                }
                stats[acc.name] = entry;
            }
            for (const ResultRow& r : out.rows) {
                if (r.method == method && r.sweep_value == sweep_value && !r.error.empty()) ++failures;
            }
            cell["failures"] = failures;
            cell["stats"] = stats;
            cells.push_back(cell);
        }
    }
    summary["cells"] = cells;
    out.summary = std::move(summary);
    return out;
}

// ---------------------------------------------------------------------------

BenchResult run_bench(std::int64_t n, const std::vector<int>& k_values, double degree,
                      double out_in_ratio, int reps, std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("run_bench: reps must be >= 1");
    BenchResult out;
    for (int k : k_values) {
        BtsbmParams params = derive_model_params(n, k, degree, out_in_ratio, ProbProfile::Geometric);
        BlockModel model = block_model_of(params);
        for (int rep = 0; rep < reps; ++rep) {
            BenchRow row;
            row.k = k;
            row.replication = rep;
            row.seed = CounterRng::derive(seed, std::uint64_t(k) * 1000003ULL + std::uint64_t(rep));
            row.n = n;
            row.hcd_ms = row.kway_ms = kNaN;
            Graph g = sample_block_model(model, row.seed);
            row.edges = g.nnz() / 2;

            HcdOptions opts;
            opts.seed = row.seed;
            try {
                auto t0 = std::chrono::steady_clock::now();
                HcdResult hr = recursive_partition(g, SplitterSpec{SplitMethod::RegularizedSpectral, 0.1},
                                                   StoppingSpec::nb(), opts);
                row.hcd_ms = now_ms_since(t0);
                row.hcd_k_hat = int(hr.tree.leaf_count());
                row.hcd_applies = hr.splitter_applies;
                row.hcd_work = hr.splitter_work;
                row.hcd_stopper_applies = hr.stopper_applies;
                row.hcd_stopper_work = hr.stopper_work;
                row.levels_ok = true;
                for (std::int64_t level : hr.level_nnz) {
                    if (level > g.nnz()) row.levels_ok = false;
                }
            } catch (const std::exception&) {
                row.levels_ok = false;
            }
            try {
                auto t0 = std::chrono::steady_clock::now();
                KwayResult kr = kway_rsc(g, k, 0.1, 1e-8, row.seed);
                row.kway_ms = now_ms_since(t0);
                row.kway_applies = kr.applies;
                row.kway_work = kr.work;
            } catch (const std::exception&) {
            }
            out.rows.push_back(row);
        }
    }
    std::ostringstream csv;
    csv << "k,replication,seed,n,edges,hcd_ms,hcd_k_hat,hcd_applies,hcd_work,"
           "hcd_stopper_applies,hcd_stopper_work,kway_ms,kway_applies,kway_work,levels_ok\n";
    for (const BenchRow& r : out.rows) {
        csv << r.k << ',' << r.replication << ',' << r.seed << ',' << r.n << ',' << r.edges << ','
            << fmt_double(r.hcd_ms) << ',' << r.hcd_k_hat << ',' << r.hcd_applies << ',' << r.hcd_work
            << ',' << r.hcd_stopper_applies << ',' << r.hcd_stopper_work << ',' << fmt_double(r.kway_ms)
            << ',' << r.kway_applies << ',' << r.kway_work << ',' << (r.levels_ok ? 1 : 0) << '\n';
    }
    out.csv = csv.str();
    return out;
}

}  // namespace hcd
