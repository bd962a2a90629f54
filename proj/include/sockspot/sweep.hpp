#pragma once

#include <string>
#include <vector>

#include "sockspot/pipeline.hpp"

namespace sockspot {

struct SweepRow {
    std::string value;
    PipelineResult result;
};

// One pipeline run per value with fixed seeds, aggregated into
// <out>/sweep.csv. Parameters:
//   density  - mean activities per split account; re-samples activity per
//              user to value*s units, then splits (election-style floor)
//   splits   - accounts per user s; re-splits the raw input
//   alpha    - threshold percentile (runs the unsupervised detector)
//   d        - embedding width
//   pq       - "p:q" walk bias pairs
//   clusters - cluster count c
std::vector<SweepRow> run_sweep(const PipelineConfig& base, const std::string& parameter,
                                const std::vector<std::string>& values);

} // namespace sockspot
