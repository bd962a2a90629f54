#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sockspot/matrix.hpp"

namespace sockspot {

// Per-node embedding vectors, index-aligned with graph node indices.
struct EmbeddingMatrix {
    int d = 0;
    std::vector<std::string> ids; // node id per row; filled by the caller
    Matrix w;                     // n×d

    int num_nodes() const { return w.rows; }
    const double* row(int i) const { return w.row(i); }
};

struct SkipgramConfig {
    int d = 128;
    int window = 10;
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025;
    uint64_t seed = 1;
    int threads = 1; // >1 switches to lock-free hogwild updates (nondeterministic)
};

struct SkipgramStats {
    std::vector<double> epoch_loss; // mean loss per trained pair
    int64_t pairs_trained = 0;
    std::vector<int> silent_nodes; // nodes absent from all walks (zero vector)
};

// Skip-gram with negative sampling over node walks. n_nodes fixes the row
// count; nodes that never appear in a walk keep the zero vector and are
// listed in stats. Single-threaded training is bit-reproducible per seed.
EmbeddingMatrix train_skipgram(const std::vector<std::vector<int>>& walks, int n_nodes,
                               const SkipgramConfig& cfg, SkipgramStats* stats = nullptr);

} // namespace sockspot
