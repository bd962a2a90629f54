#pragma once

#include <cstdint>
#include <string>

#include "sockspot/katz.hpp"
#include "sockspot/node2vec.hpp"
#include "sockspot/pair_ops.hpp"
#include "sockspot/skipgram.hpp"
#include "sockspot/spread.hpp"

namespace sockspot {

// One flat key=value config; CLI flags override file entries. Every default
// is the recommended configuration, so a bare run is already the full
// semi-supervised embedding detector.
struct PipelineConfig {
    std::string input;
    std::string format = "auto"; // csv|jsonl|auto
    std::string method = "semi-embed";
    bool weighted = false;
    bool filter = true;

    std::string katz_beta = "auto"; // auto|<float>
    double katz_tol = 1e-8;
    int katz_max_terms = 1000;
    std::string katz_method = "auto"; // auto|series|solve
    double alpha = 95.0;              // unsupervised threshold percentile
    double feature_eps = 1e-6;

    double p = 0.25;
    double q = 4.0;
    int num_walks = 10;
    int walk_length = 80;
    int d = 128;
    int window = 10;
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025;
    int threads = 1; // >1: hogwild skip-gram, loses determinism
    std::string op = "l1";

    std::string sigma = "auto"; // auto|<float>
    double clamp = 0.2;
    double spread_tol = 1e-6;
    int max_iter = 1000;
    int64_t pair_budget = 20000;
    int knn = 10;

    int clusters = 3;

    double truth_fraction = 0.25;
    bool use_alternative = false;
    double alt_high = 99.95;
    double alt_low = 80.0;
    std::string truth_file; // ownership CSV; falls back to the user_id column

    // split settings for the sweep drivers that re-split internally
    int sweep_s = 15;
    int64_t sweep_min_activities = 1000;

    uint64_t seed = 7;
    std::string out_dir = "out";
    bool cache = true;
    std::string cache_dir; // defaults to <out_dir>/cache
};

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);
void load_config_file(PipelineConfig& cfg, const std::string& path);
void validate_config(const PipelineConfig& cfg);

KatzConfig make_katz_config(const PipelineConfig& cfg);
WalkConfig make_walk_config(const PipelineConfig& cfg);
SkipgramConfig make_skipgram_config(const PipelineConfig& cfg);
SpreadConfig make_spread_config(const PipelineConfig& cfg);
PairOp pair_op(const PipelineConfig& cfg);

} // namespace sockspot
