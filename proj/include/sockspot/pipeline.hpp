#pragma once

#include <string>
#include <vector>

#include "sockspot/activity.hpp"
#include "sockspot/config.hpp"
#include "sockspot/metrics.hpp"

namespace sockspot {

struct StageTime {
    std::string name;
    double seconds = 0.0;
    bool cached = false;
};

struct PipelineResult {
    bool have_report = false;
    EvalReport report;

    int64_t n_accounts = 0;
    int64_t n_pages = 0;
    int64_t removed_accounts = 0;
    int64_t candidate_pair_count = 0;
    int64_t truth_queries = 0;     // accounts queried for ground truth
    int64_t train_labeled = 0;     // pairs entering spreading with a label
    int64_t alt_conflicts = 0;     // alternative labels disagreeing with real truth
    int64_t alt_labeled = 0;
    int64_t degenerate_clusters = 0;
    bool all_converged = true;

    std::vector<StageTime> stages;
    std::string predictions_path;
    std::string report_path;
};

// End-to-end run per the configured method; persists every intermediate
// artifact under cfg.out_dir and emits an EvalReport when truth is available.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Same, on records that are already in memory (sweep drivers re-split there).
PipelineResult run_pipeline_records(const PipelineConfig& cfg,
                                    std::vector<ActivityRecord> records);

} // namespace sockspot
