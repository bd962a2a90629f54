#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sockspot/matrix.hpp"

namespace sockspot {

struct ClusterAssignment {
    int c = 1;
    std::vector<int> of;          // account index -> cluster in [0,c)
    std::vector<std::string> ids; // account ids, index-aligned

    std::vector<std::vector<int>> members() const;
};

struct SpectralConfig {
    int c = 3;
    uint64_t seed = 1;
    int kmeans_restarts = 20;
    int kmeans_max_iters = 100;
};

// Normalized-cut style spectral clustering of embedding rows: RBF affinity
// (median-heuristic sigma), D^{-1/2} A D^{-1/2}, top-c eigenvectors,
// row-normalized, then seeded k-means++ on the rows.
ClusterAssignment spectral_cluster(const Matrix& points, const std::vector<std::string>& ids,
                                   const SpectralConfig& cfg);

// Exactly the within-cluster pairs, u < v, sorted by (u,v).
std::vector<std::pair<int, int>> candidate_pairs(const ClusterAssignment& assignment);

} // namespace sockspot
