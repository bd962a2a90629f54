#include "sockspot/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "sockspot/errors.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError("expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& v) {
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + v + "'");
    }
}

int64_t parse_int(const std::string& v) {
    try {
        size_t used = 0;
        int64_t i = std::stoll(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer, got '" + v + "'");
    }
}

} // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    using Setter = std::function<void(PipelineConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"input", [](PipelineConfig& c, const std::string& v) { c.input = v; }},
        {"format", [](PipelineConfig& c, const std::string& v) { c.format = v; }},
        {"method", [](PipelineConfig& c, const std::string& v) { c.method = v; }},
        {"weighted", [](PipelineConfig& c, const std::string& v) { c.weighted = parse_bool(v); }},
        {"filter", [](PipelineConfig& c, const std::string& v) { c.filter = parse_bool(v); }},
        {"katz.beta", [](PipelineConfig& c, const std::string& v) { c.katz_beta = v; }},
        {"katz.tol", [](PipelineConfig& c, const std::string& v) { c.katz_tol = parse_double(v); }},
        {"katz.max_terms",
         [](PipelineConfig& c, const std::string& v) { c.katz_max_terms = static_cast<int>(parse_int(v)); }},
        {"katz.method", [](PipelineConfig& c, const std::string& v) { c.katz_method = v; }},
        {"katz.alpha", [](PipelineConfig& c, const std::string& v) { c.alpha = parse_double(v); }},
        {"katz.eps", [](PipelineConfig& c, const std::string& v) { c.feature_eps = parse_double(v); }},
        {"embed.p", [](PipelineConfig& c, const std::string& v) { c.p = parse_double(v); }},
        {"embed.q", [](PipelineConfig& c, const std::string& v) { c.q = parse_double(v); }},
        {"embed.num_walks",
         [](PipelineConfig& c, const std::string& v) { c.num_walks = static_cast<int>(parse_int(v)); }},
        {"embed.walk_length",
         [](PipelineConfig& c, const std::string& v) { c.walk_length = static_cast<int>(parse_int(v)); }},
        {"embed.d", [](PipelineConfig& c, const std::string& v) { c.d = static_cast<int>(parse_int(v)); }},
        {"embed.window",
         [](PipelineConfig& c, const std::string& v) { c.window = static_cast<int>(parse_int(v)); }},
        {"embed.negatives",
         [](PipelineConfig& c, const std::string& v) { c.negatives = static_cast<int>(parse_int(v)); }},
        {"embed.epochs",
         [](PipelineConfig& c, const std::string& v) { c.epochs = static_cast<int>(parse_int(v)); }},
        {"embed.lr", [](PipelineConfig& c, const std::string& v) { c.lr = parse_double(v); }},
        {"embed.threads",
         [](PipelineConfig& c, const std::string& v) { c.threads = static_cast<int>(parse_int(v)); }},
        {"embed.op", [](PipelineConfig& c, const std::string& v) { c.op = v; }},
        {"spread.sigma", [](PipelineConfig& c, const std::string& v) { c.sigma = v; }},
        {"spread.clamp", [](PipelineConfig& c, const std::string& v) { c.clamp = parse_double(v); }},
        {"spread.tol",
         [](PipelineConfig& c, const std::string& v) { c.spread_tol = parse_double(v); }},
        {"spread.max_iter",
         [](PipelineConfig& c, const std::string& v) { c.max_iter = static_cast<int>(parse_int(v)); }},
        {"spread.pair_budget",
         [](PipelineConfig& c, const std::string& v) { c.pair_budget = parse_int(v); }},
        {"spread.knn",
         [](PipelineConfig& c, const std::string& v) { c.knn = static_cast<int>(parse_int(v)); }},
        {"cluster.c",
         [](PipelineConfig& c, const std::string& v) { c.clusters = static_cast<int>(parse_int(v)); }},
        {"truth.fraction",
         [](PipelineConfig& c, const std::string& v) { c.truth_fraction = parse_double(v); }},
        {"truth.alternative",
         [](PipelineConfig& c, const std::string& v) { c.use_alternative = parse_bool(v); }},
        {"truth.high", [](PipelineConfig& c, const std::string& v) { c.alt_high = parse_double(v); }},
        {"truth.low", [](PipelineConfig& c, const std::string& v) { c.alt_low = parse_double(v); }},
        {"truth.file", [](PipelineConfig& c, const std::string& v) { c.truth_file = v; }},
        {"sweep.s",
         [](PipelineConfig& c, const std::string& v) { c.sweep_s = static_cast<int>(parse_int(v)); }},
        {"sweep.min_activities",
         [](PipelineConfig& c, const std::string& v) { c.sweep_min_activities = parse_int(v); }},
        {"seed",
         [](PipelineConfig& c, const std::string& v) { c.seed = static_cast<uint64_t>(parse_int(v)); }},
        {"out", [](PipelineConfig& c, const std::string& v) { c.out_dir = v; }},
        {"cache", [](PipelineConfig& c, const std::string& v) { c.cache = parse_bool(v); }},
        {"cache_dir", [](PipelineConfig& c, const std::string& v) { c.cache_dir = v; }},
    };
    auto it = setters.find(key);
    if (it == setters.end())
        throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, value);
}

void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.method != "unsup-katz" && cfg.method != "semi-katz" && cfg.method != "semi-embed")
        throw ConfigError("method must be unsup-katz, semi-katz or semi-embed");
    if (cfg.format != "auto" && cfg.format != "csv" && cfg.format != "jsonl")
        throw ConfigError("format must be csv, jsonl or auto");
    if (cfg.katz_method != "auto" && cfg.katz_method != "series" && cfg.katz_method != "solve")
        throw ConfigError("katz.method must be auto, series or solve");
    if (cfg.katz_beta != "auto")
        parse_double(cfg.katz_beta);
    if (cfg.sigma != "auto" && parse_double(cfg.sigma) <= 0.0)
        throw ConfigError("spread.sigma must be positive or 'auto'");
    if (cfg.alpha < 0.0 || cfg.alpha > 100.0)
        throw ConfigError("katz.alpha must be a percentile in [0,100]");
    if (cfg.p <= 0.0 || cfg.q <= 0.0)
        throw ConfigError("embed.p and embed.q must be positive");
    if (cfg.d < 1 || cfg.num_walks < 1 || cfg.walk_length < 1)
        throw ConfigError("embed.d, embed.num_walks, embed.walk_length must be >= 1");
    if (cfg.clamp <= 0.0 || cfg.clamp >= 1.0)
        throw ConfigError("spread.clamp must be in (0,1)");
    if (cfg.clusters < 1)
        throw ConfigError("cluster.c must be >= 1");
    if (cfg.truth_fraction <= 0.0 || cfg.truth_fraction > 1.0)
        if (!cfg.use_alternative)
            throw ConfigError("truth.fraction must be in (0,1]");
    if (cfg.alt_low >= cfg.alt_high)
        throw ConfigError("truth.low must be below truth.high");
    parse_pair_op(cfg.op);
}

KatzConfig make_katz_config(const PipelineConfig& cfg) {
    KatzConfig k;
    k.auto_beta = cfg.katz_beta == "auto";
    if (!k.auto_beta)
        k.beta = parse_double(cfg.katz_beta);
    k.tol = cfg.katz_tol;
    k.max_terms = cfg.katz_max_terms;
    k.method = cfg.katz_method == "series" ? KatzMethod::Series
               : cfg.katz_method == "solve" ? KatzMethod::Solve
                                            : KatzMethod::Auto;
    return k;
}

WalkConfig make_walk_config(const PipelineConfig& cfg) {
    WalkConfig w;
    w.p = cfg.p;
    w.q = cfg.q;
    w.num_walks = cfg.num_walks;
    w.walk_length = cfg.walk_length;
    w.seed = derive_seed(cfg.seed, "walks");
    return w;
}

SkipgramConfig make_skipgram_config(const PipelineConfig& cfg) {
    SkipgramConfig s;
    s.d = cfg.d;
    s.window = cfg.window;
    s.negatives = cfg.negatives;
    s.epochs = cfg.epochs;
    s.lr = cfg.lr;
    s.seed = derive_seed(cfg.seed, "skipgram");
    s.threads = cfg.threads;
    return s;
}

SpreadConfig make_spread_config(const PipelineConfig& cfg) {
    SpreadConfig s;
    s.sigma = cfg.sigma == "auto" ? 0.0 : parse_double(cfg.sigma);
    s.clamp = cfg.clamp;
    s.tol = cfg.spread_tol;
    s.max_iter = cfg.max_iter;
    s.pair_budget = cfg.pair_budget;
    s.knn = cfg.knn;
    return s;
}

PairOp pair_op(const PipelineConfig& cfg) { return parse_pair_op(cfg.op); }

} // namespace sockspot
