#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcd/experiment.hpp"

namespace hcd {

namespace {

double profile_factor(ProbProfile profile, double param, int r) {
    switch (profile) {
        case ProbProfile::Geometric:
            return std::pow(param, r);
        case ProbProfile::Arithmetic:
            return 1.0 - param * r;
        case ProbProfile::Flat:
            return param;
    }
    throw std::logic_error("profile_factor: unknown profile");
}

// Between/within expected edge-count ratio for factors a_r at block size m:
//   ratio = (m / (m - 1)) * sum_{r=1}^{d} 2^{r-1} a_r
double ratio_of_param(ProbProfile profile, double param, int d, double m) {
    double s = 0.0;
    for (int r = 1; r <= d; ++r) s += std::ldexp(profile_factor(profile, param, r), r - 1);
    return m / (m - 1.0) * s;
}

}  // namespace

BtsbmParams derive_model_params(std::int64_t n, int K, double avg_degree, double out_in_ratio,
                                ProbProfile profile) {
    if (K < 2 || (K & (K - 1)) != 0) {
        throw std::invalid_argument("derive_model_params: K must be a power of two >= 2");
    }
    if (n <= 0 || n % K != 0) {
        throw std::invalid_argument("derive_model_params: n must be a positive multiple of K");
    }
    std::int64_t m = n / K;
    if (m < 2) {
        throw std::invalid_argument("derive_model_params: need at least 2 nodes per community");
    }
    if (!(avg_degree > 0.0)) {
        throw std::invalid_argument("derive_model_params: average degree must be positive");
    }
    if (!(out_in_ratio > 0.0)) {
        throw std::invalid_argument("derive_model_params: out/in ratio must be positive");
    }
    int d = 0;
    while ((1 << d) < K) ++d;

    // Solve ratio(param) = out_in_ratio by bisection on the profile parameter.
    // Geometric is increasing on [0, 1]; arithmetic is decreasing on [0, 1/d];
    // flat is linear on [0, 1] (solved in the same loop for uniformity).
    double lo = 0.0, hi = 1.0;
    bool increasing = true;
    if (profile == ProbProfile::Arithmetic) {
        hi = 1.0 / d;
        increasing = false;
    }
    auto f = [&](double x) { return ratio_of_param(profile, x, d, double(m)); };
    double f_lo = f(lo), f_hi = f(hi);
    double r_min = std::min(f_lo, f_hi), r_max = std::max(f_lo, f_hi);
    if (out_in_ratio <= r_min || out_in_ratio >= r_max) {
        std::ostringstream msg;
        msg << "derive_model_params: out/in ratio " << out_in_ratio
            << " is not attainable with this profile at K=" << K << ", n=" << n
            << " (attainable open range: " << r_min << " to " << r_max << ")";
        throw std::invalid_argument(msg.str());
    }
    double param = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        param = 0.5 * (lo + hi);
        double val = f(param);
        if (std::abs(val - out_in_ratio) <= 1e-10 * std::max(1.0, out_in_ratio)) break;
        if ((val < out_in_ratio) == increasing) {
            lo = param;
        } else {
            hi = param;
        }
        if (hi - lo < 1e-16) break;
    }

    // Scale from the degree target: E[deg] = p0 * (m * (1 + S) - 1) with
    // S = sum 2^{r-1} a_r.
    double s = 0.0;
    for (int r = 1; r <= d; ++r) s += std::ldexp(profile_factor(profile, param, r), r - 1);
    double denom = double(m) * (1.0 + s) - 1.0;
    double p0 = avg_degree / denom;
    if (p0 > 1.0) {
        std::ostringstream msg;
        msg << "derive_model_params: average degree " << avg_degree
            << " is not attainable (upper communities would need within-probability " << p0
            << " > 1; the attainable range at these settings is 0 to " << denom << ")";
        throw std::invalid_argument(msg.str());
    }

    std::vector<double> probs(std::size_t(d) + 1);
    probs[0] = p0;
    for (int r = 1; r <= d; ++r) probs[std::size_t(r)] = p0 * profile_factor(profile, param, r);
    return BtsbmParams::balanced_model(d, m, probs);
}

double expected_average_degree(const BtsbmParams& params) {
    // Balanced only: each node sees (m-1) peers at p0 and m*2^{r-1} at p_r.
    std::int64_t m = params.sizes.at(0);
    for (std::int64_t sz : params.sizes) {
        if (sz != m) throw std::invalid_argument("expected_average_degree: balanced model required");
    }
    double deg = (double(m) - 1.0) * params.probs[0];
    for (int r = 1; r <= params.depth; ++r) {
        deg += double(m) * std::ldexp(params.probs[std::size_t(r)], r - 1);
    }
    return deg;
}

double expected_out_in_ratio(const BtsbmParams& params) {
    std::int64_t m = params.sizes.at(0);
    for (std::int64_t sz : params.sizes) {
        if (sz != m) throw std::invalid_argument("expected_out_in_ratio: balanced model required");
    }
    double within = (double(m) - 1.0) * params.probs[0];
    double between = 0.0;
    for (int r = 1; r <= params.depth; ++r) {
        between += double(m) * std::ldexp(params.probs[std::size_t(r)], r - 1);
    }
    if (within <= 0.0) throw std::invalid_argument("expected_out_in_ratio: zero within-probability");
    return between / within;
}

// ---------------------------------------------------------------------------
// flat key = value config text

namespace {

struct ConfigValue {
    enum class Kind { Scalar, Array } kind = Kind::Scalar;
    std::string scalar;
    std::vector<std::string> items;
    int line = 0;
};

struct ConfigMap {
    std::map<std::string, ConfigValue> entries;
    std::set<std::string> consumed;

    [[noreturn]] static void fail(const std::string& key, int line, const std::string& what) {
        std::ostringstream msg;
        msg << "config: key '" << key << "' (line " << line << "): " << what;
        throw std::invalid_argument(msg.str());
    }

    const ConfigValue* find(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        consumed.insert(key);
        return &it->second;
    }

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    static double parse_number(const std::string& key, int line, const std::string& text) {
        try {
            std::size_t pos = 0;
            double v = std::stod(text, &pos);
            if (pos != text.size()) fail(key, line, "trailing characters in number '" + text + "'");
            return v;
        } catch (const std::invalid_argument&) {
            fail(key, line, "expected a number, got '" + text + "'");
        } catch (const std::out_of_range&) {
            fail(key, line, "number out of range: '" + text + "'");
        }
    }

    static std::int64_t parse_int(const std::string& key, int line, const std::string& text) {
        double v = parse_number(key, line, text);
        auto iv = std::int64_t(std::llround(v));
        if (std::abs(v - double(iv)) > 1e-9) fail(key, line, "expected an integer, got '" + text + "'");
        return iv;
    }

    double number(const std::string& key, double fallback) {
        const ConfigValue* v = find(key);
        if (!v) return fallback;
        if (v->kind != ConfigValue::Kind::Scalar) fail(key, v->line, "expected a scalar, got an array");
        return parse_number(key, v->line, v->scalar);
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        const ConfigValue* v = find(key);
        if (!v) return fallback;
        if (v->kind != ConfigValue::Kind::Scalar) fail(key, v->line, "expected a scalar, got an array");
        return parse_int(key, v->line, v->scalar);
    }

    std::string word(const std::string& key, const std::string& fallback) {
        const ConfigValue* v = find(key);
        if (!v) return fallback;
        if (v->kind != ConfigValue::Kind::Scalar) fail(key, v->line, "expected a scalar, got an array");
        return v->scalar;
    }

    std::vector<double> number_array(const std::string& key) {
        const ConfigValue* v = find(key);
        if (!v) return {};
        if (v->kind != ConfigValue::Kind::Array) fail(key, v->line, "expected an array like [1, 2]");
        std::vector<double> out;
        out.reserve(v->items.size());
        for (const std::string& item : v->items) out.push_back(parse_number(key, v->line, item));
        return out;
    }

    std::vector<std::string> word_array(const std::string& key) {
        const ConfigValue* v = find(key);
        if (!v) return {};
        if (v->kind != ConfigValue::Kind::Array) fail(key, v->line, "expected an array like [a, b]");
        return v->items;
    }

    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : entries) {
            if (!consumed.count(key)) {
                std::ostringstream one;
                one << "'" << key << "' (line " << value.line << ")";
                unknown.push_back(one.str());
            }
        }
        if (!unknown.empty()) {
            std::ostringstream msg;
            msg << "config: unknown key" << (unknown.size() > 1 ? "s" : "") << ": ";
            for (std::size_t i = 0; i < unknown.size(); ++i) {
                if (i) msg << ", ";
                msg << unknown[i];
            }
            throw std::invalid_argument(msg.str());
        }
    }
};

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& key, int line, std::string token) {
    token = strip(token);
    if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
        return token.substr(1, token.size() - 2);
    }
    if (!token.empty() && (token.front() == '"' || token.back() == '"')) {
        ConfigMap::fail(key, line, "unbalanced quotes in '" + token + "'");
    }
    return token;
}

ConfigMap parse_config_map(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // Comments start at '#' outside quotes.
        bool in_quotes = false;
        std::string line;
        for (char c : raw) {
            if (c == '"') in_quotes = !in_quotes;
            if (c == '#' && !in_quotes) break;
            line.push_back(c);
        }
        line = strip(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << "config: line " << line_no << " is not of the form 'key = value': '" << line << "'";
            throw std::invalid_argument(msg.str());
        }
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key.empty() ||
            key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_") != std::string::npos) {
            std::ostringstream msg;
            msg << "config: line " << line_no << ": invalid key '" << key
                << "' (lower-case letters, digits and underscores only)";
            throw std::invalid_argument(msg.str());
        }
        if (map.entries.count(key)) {
            std::ostringstream msg;
            msg << "config: line " << line_no << ": duplicate key '" << key << "'";
            throw std::invalid_argument(msg.str());
        }
        ConfigValue cv;
        cv.line = line_no;
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') ConfigMap::fail(key, line_no, "array is missing the closing ']'");
            cv.kind = ConfigValue::Kind::Array;
            std::string body = value.substr(1, value.size() - 2);
            std::string token;
            bool quoted = false;
            auto push = [&]() {
                std::string item = unquote(key, line_no, token);
                if (item.empty()) ConfigMap::fail(key, line_no, "empty array element");
                cv.items.push_back(item);
                token.clear();
            };
            bool any = !strip(body).empty();
            for (char c : body) {
                if (c == '"') quoted = !quoted;
                if (c == ',' && !quoted) {
                    push();
                } else {
                    token.push_back(c);
                }
            }
            if (any) push();
        } else {
            if (value.empty()) ConfigMap::fail(key, line_no, "missing value");
            cv.scalar = unquote(key, line_no, value);
        }
        map.entries.emplace(std::move(key), std::move(cv));
    }
    return map;
}

const std::vector<std::string> kAllMethods = {"hcd_sign", "hcd_spec", "kway_rsc"};
const std::vector<std::string> kAllMetrics = {"nmi",             "similarity_error",
                                              "level1_accuracy", "level2_accuracy",
                                              "phat_error",      "k_hat"};

void require_subset(const std::string& key, const std::vector<std::string>& values,
                    const std::vector<std::string>& allowed) {
    for (const std::string& v : values) {
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
            std::ostringstream msg;
            msg << "config: key '" << key << "': unknown value '" << v << "' (allowed:";
            for (const std::string& a : allowed) msg << " " << a;
            msg << ")";
            throw std::invalid_argument(msg.str());
        }
    }
    std::set<std::string> seen;
    for (const std::string& v : values) {
        if (!seen.insert(v).second) {
            throw std::invalid_argument("config: key '" + key + "': duplicate value '" + v + "'");
        }
    }
}

}  // namespace

StoppingSpec parse_stopper(const std::string& text) {
    if (text == "nb") return StoppingSpec::nb();
    if (text == "none") return StoppingSpec::none();
    if (text.rfind("fixed:", 0) == 0) {
        int depth = int(ConfigMap::parse_int("stopper", 0, text.substr(6)));
        if (depth < 0) throw std::invalid_argument("stopper: fixed depth must be >= 0");
        return StoppingSpec::fixed(depth);
    }
    if (text.rfind("minsize:", 0) == 0) {
        std::int64_t size = ConfigMap::parse_int("stopper", 0, text.substr(8));
        if (size < 2) throw std::invalid_argument("stopper: minimum split size must be >= 2");
        return StoppingSpec::size_floor(size);
    }
    throw std::invalid_argument("stopper: expected nb, none, fixed:<depth> or minsize:<size>, got '" +
                                text + "'");
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    ConfigMap map = parse_config_map(text);
    ExperimentConfig cfg;

    std::string model = map.word("model", "balanced");
    std::string profile = map.word("profile", "geometric");
    if (profile == "geometric") {
        cfg.model.profile = ProbProfile::Geometric;
    } else if (profile == "arithmetic") {
        cfg.model.profile = ProbProfile::Arithmetic;
    } else if (profile == "flat") {
        cfg.model.profile = ProbProfile::Flat;
    } else {
        throw std::invalid_argument("config: key 'profile': expected geometric, arithmetic or flat, got '" +
                                    profile + "'");
    }

    cfg.sweep = map.word("sweep", "none");
    if (cfg.sweep != "none" && cfg.sweep != "k" && cfg.sweep != "degree") {
        throw std::invalid_argument("config: key 'sweep': expected none, k or degree, got '" + cfg.sweep +
                                    "'");
    }
    cfg.sweep_values = map.number_array("sweep_values");
    if (cfg.sweep == "none") {
        if (!cfg.sweep_values.empty()) {
            throw std::invalid_argument("config: 'sweep_values' given but 'sweep' is none");
        }
    } else if (cfg.sweep_values.empty()) {
        throw std::invalid_argument("config: 'sweep = " + cfg.sweep + "' requires a nonempty 'sweep_values'");
    }

    if (model == "balanced") {
        cfg.model.kind = ModelSpec::Kind::Balanced;
        cfg.model.n = map.integer("n", 0);
        if (cfg.model.n <= 0) throw std::invalid_argument("config: balanced model requires a positive 'n'");
        cfg.model.out_in_ratio = map.number("out_in_ratio", 0.0);
        if (!(cfg.model.out_in_ratio > 0.0)) {
            throw std::invalid_argument("config: balanced model requires a positive 'out_in_ratio'");
        }
        cfg.model.k = int(map.integer("k", 0));
        cfg.model.degree = map.number("degree", 0.0);
        if (cfg.sweep != "k") {
            int k = cfg.model.k;
            if (k < 2 || (k & (k - 1)) != 0 || cfg.model.n % k != 0) {
                throw std::invalid_argument(
                    "config: balanced model requires a power-of-two 'k' dividing n (or sweep = k)");
            }
        }
        if (cfg.sweep != "degree" && !(cfg.model.degree > 0.0)) {
            throw std::invalid_argument("config: balanced model requires a positive 'degree' (or sweep = degree)");
        }
    } else if (model == "explicit") {
        cfg.model.kind = ModelSpec::Kind::Explicit;
        if (cfg.sweep != "none") {
            throw std::invalid_argument("config: explicit models do not support sweeps");
        }
        int d = int(map.integer("d", 0));
        if (d < 1) throw std::invalid_argument("config: explicit model requires 'd' >= 1");
        std::vector<double> probs = map.number_array("p");
        bool has_rho = map.has("rho");
        if (!probs.empty() && has_rho) {
            throw std::invalid_argument("config: give either 'p' or 'rho' + 'a', not both");
        }
        if (probs.empty()) {
            double rho = map.number("rho", -1.0);
            std::vector<double> a = map.number_array("a");
            if (!(rho > 0.0) || a.size() != std::size_t(d)) {
                throw std::invalid_argument(
                    "config: explicit model requires 'p = [p0..pd]' or 'rho' with 'a = [a1..ad]'");
            }
            probs.resize(std::size_t(d) + 1);
            probs[0] = rho;
            for (int r = 1; r <= d; ++r) probs[std::size_t(r)] = rho * a[std::size_t(r - 1)];
        } else if (probs.size() != std::size_t(d) + 1) {
            throw std::invalid_argument("config: 'p' must list d + 1 probabilities p0..pd");
        }
        std::vector<double> sizes_raw = map.number_array("block_sizes");
        std::vector<std::int64_t> sizes;
        if (!sizes_raw.empty()) {
            for (double v : sizes_raw) {
                auto iv = std::int64_t(std::llround(v));
                if (std::abs(v - double(iv)) > 1e-9 || iv < 1) {
                    throw std::invalid_argument("config: 'block_sizes' must be positive integers");
                }
                sizes.push_back(iv);
            }
        } else {
            std::int64_t n = map.integer("n", 0);
            std::int64_t kk = std::int64_t(1) << d;
            if (n <= 0 || n % kk != 0) {
                throw std::invalid_argument(
                    "config: explicit model requires 'block_sizes' or an 'n' divisible by 2^d");
            }
            sizes.assign(std::size_t(kk), n / kk);
        }
        cfg.model.explicit_params = BtsbmParams{d, std::move(sizes), std::move(probs)};
        cfg.model.explicit_params.validate();
    } else if (model == "unbalanced_a" || model == "unbalanced_b") {
        cfg.model.kind =
            model == "unbalanced_a" ? ModelSpec::Kind::UnbalancedA : ModelSpec::Kind::UnbalancedB;
        if (cfg.sweep != "none") {
            throw std::invalid_argument("config: canned unbalanced models do not support sweeps");
        }
    } else {
        throw std::invalid_argument(
            "config: key 'model': expected balanced, explicit, unbalanced_a or unbalanced_b, got '" +
            model + "'");
    }

    cfg.replications = int(map.integer("replications", 20));
    if (cfg.replications < 1) throw std::invalid_argument("config: 'replications' must be >= 1");
    cfg.seed = std::uint64_t(map.integer("seed", 12345));

    cfg.methods = map.word_array("methods");
    if (cfg.methods.empty()) cfg.methods = kAllMethods;
    require_subset("methods", cfg.methods, kAllMethods);

    cfg.metrics = map.word_array("metrics");
    if (cfg.metrics.empty()) cfg.metrics = kAllMetrics;
    require_subset("metrics", cfg.metrics, kAllMetrics);

    cfg.stopper = map.word("stopper", "nb");
    parse_stopper(cfg.stopper);  // validate now, fail at parse time

    cfg.tau = map.number("tau", 0.1);
    if (!(cfg.tau >= 0.0)) throw std::invalid_argument("config: 'tau' must be >= 0");

    cfg.kway_k = map.word("kway_k", "auto");
    if (cfg.kway_k != "auto" && cfg.kway_k != "truth") {
        std::int64_t k = ConfigMap::parse_int("kway_k", 0, cfg.kway_k);
        if (k < 1) throw std::invalid_argument("config: 'kway_k' must be auto, truth or a positive integer");
    }

    cfg.tol = map.number("tol", 1e-8);
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("config: 'tol' must be positive");
    cfg.min_size = map.integer("min_size", 4);
    if (cfg.min_size < 2) throw std::invalid_argument("config: 'min_size' must be >= 2");
    cfg.max_depth = int(map.integer("max_depth", 30));
    if (cfg.max_depth < 1) throw std::invalid_argument("config: 'max_depth' must be >= 1");

    map.finish();

    // Sweep value sanity for the balanced family.
    if (cfg.sweep == "k") {
        if (cfg.model.kind != ModelSpec::Kind::Balanced) {
            throw std::invalid_argument("config: 'sweep = k' requires the balanced model");
        }
        for (double v : cfg.sweep_values) {
            auto k = std::int64_t(std::llround(v));
            if (std::abs(v - double(k)) > 1e-9 || k < 2 || (k & (k - 1)) != 0 || cfg.model.n % k != 0) {
                std::ostringstream msg;
                msg << "config: sweep value " << v << " is not a power-of-two community count dividing n";
                throw std::invalid_argument(msg.str());
            }
        }
    } else if (cfg.sweep == "degree") {
        if (cfg.model.kind != ModelSpec::Kind::Balanced) {
            throw std::invalid_argument("config: 'sweep = degree' requires the balanced model");
        }
        for (double v : cfg.sweep_values) {
            if (!(v > 0.0)) throw std::invalid_argument("config: degree sweep values must be positive");
        }
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// canned unbalanced models and instantiation

namespace {

// Both unbalanced variants sample from the balanced 32-community model
// (d = 5, 100 nodes per community, average degree 35, between/within ratio
// 0.15, geometric decay) and coarsen only the evaluation truth: selected
// sibling subtrees count as single communities with unequal tree depths.
// Merging the truth rather than the generator keeps the average degree at 35
// and keeps the merged groups from turning into dense blobs that would
// dominate the spectrum.
ModelInstance canned_unbalanced(bool variant_b) {
    BtsbmParams base = derive_model_params(3200, 32, 35.0, 0.45, ProbProfile::Geometric);
    std::vector<std::string> merges;
    if (!variant_b) {
        // 28 truth communities: four sibling pairs merged one level up.
        merges = {"0000", "0100", "1000", "1100"};
    } else {
        // 16 truth communities: two full depth-3 subtrees collapsed plus two
        // merged sibling pairs.
        merges = {"00", "01", "1000", "1100"};
    }
    // merge_communities wants a full antichain: the merged prefixes plus every
    // depth-5 leaf they do not cover.
    std::vector<std::string> leaves = merges;
    for (int idx = 0; idx < 32; ++idx) {
        std::string lab(5, '0');
        for (int b = 0; b < 5; ++b)
            if (idx & (1 << (4 - b))) lab[std::size_t(b)] = '1';
        bool covered = false;
        for (const auto& m : merges)
            if (lab.compare(0, m.size(), m) == 0) { covered = true; break; }
        if (!covered) leaves.push_back(lab);
    }
    BlockModel merged = merge_communities(base, leaves);

    ModelInstance inst;
    inst.model = block_model_of(base);  // the sampler keeps the fine structure
    std::vector<int> fine = inst.model.node_community();
    std::vector<int> coarse = merged.node_community();
    inst.truth_assign.assign(coarse.begin(), coarse.end());
    inst.truth_tree = merged.tree();
    inst.truth_k = int(merged.labels.size());
    inst.prob_assign.assign(fine.begin(), fine.end());
    inst.prob_b = inst.model.B;
    // Expected edge density between truth communities (self-pairs excluded),
    // for anything that wants a block matrix at truth granularity.
    const int kt = inst.truth_k;
    const int kf = int(inst.model.labels.size());
    std::vector<int> to_coarse(std::size_t(kf), -1);
    for (std::size_t i = 0; i < fine.size(); ++i) to_coarse[std::size_t(fine[i])] = coarse[i];
    inst.truth_b = Matrix(kt, kt);
    Matrix den(kt, kt);
    for (int c = 0; c < kf; ++c)
        for (int c2 = 0; c2 < kf; ++c2) {
            const double nc = double(inst.model.sizes[std::size_t(c)]);
            const double nc2 = double(inst.model.sizes[std::size_t(c2)]);
            double pairs = nc * nc2;
            double edges = pairs * inst.model.B(c, c2);
            if (c == c2) {
                pairs -= nc;
                edges -= nc * inst.model.B(c, c2);
            }
            inst.truth_b(to_coarse[std::size_t(c)], to_coarse[std::size_t(c2)]) += edges;
            den(to_coarse[std::size_t(c)], to_coarse[std::size_t(c2)]) += pairs;
        }
    for (int s = 0; s < kt; ++s)
        for (int t = 0; t < kt; ++t) inst.truth_b(s, t) /= den(s, t);
    return inst;
}

}  // namespace

ModelInstance instantiate_model(const ExperimentConfig& cfg, double sweep_value) {
    if (cfg.model.kind == ModelSpec::Kind::UnbalancedA) return canned_unbalanced(false);
    if (cfg.model.kind == ModelSpec::Kind::UnbalancedB) return canned_unbalanced(true);
    ModelInstance inst;
    if (cfg.model.kind == ModelSpec::Kind::Balanced) {
        int k = cfg.model.k;
        double degree = cfg.model.degree;
        if (cfg.sweep == "k") k = int(std::llround(sweep_value));
        if (cfg.sweep == "degree") degree = sweep_value;
        BtsbmParams params =
            derive_model_params(cfg.model.n, k, degree, cfg.model.out_in_ratio, cfg.model.profile);
        inst.model = block_model_of(params);
    } else {
        inst.model = block_model_of(cfg.model.explicit_params);
    }
    std::vector<int> community = inst.model.node_community();
    inst.truth_assign.assign(community.begin(), community.end());
    inst.truth_tree = inst.model.tree();
    inst.truth_b = inst.model.B;
    inst.truth_k = int(inst.model.labels.size());
    inst.prob_assign = inst.truth_assign;
    inst.prob_b = inst.truth_b;
    return inst;
}

}  // namespace hcd
