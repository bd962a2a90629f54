#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sockspot/graph.hpp"
#include "sockspot/kernels.hpp"
#include "sockspot/matrix.hpp"

namespace sockspot {

// Dense symmetric node-similarity matrix S = sum_{k>=1} beta^k M^k over the
// whole node set; account rows come first (indices < num_accounts).
struct SimilarityMatrix {
    int n = 0;
    int num_accounts = 0;
    double beta = 0.0;
    double tol = 0.0;
    bool converged = true;
    int terms = 0; // series terms used; 0 for the direct solve
    Matrix s;
};

enum class KatzMethod { Auto, Series, Solve };

struct KatzConfig {
    bool auto_beta = true; // beta = 0.9 / ||M||_2
    double beta = 0.0;     // used when auto_beta is off; 0 yields the zero matrix
    double tol = 1e-8;
    int max_terms = 1000;
    KatzMethod method = KatzMethod::Auto;
};

// Largest singular value of a symmetric matrix (power iteration on M^2,
// relative tolerance). Returns 0 for the zero matrix.
double spectral_norm(const kernels::Csr& m, double tol = 1e-12);

SimilarityMatrix katz_adjacency(const kernels::Csr& m, int num_accounts, const KatzConfig& cfg);
SimilarityMatrix katz_matrix(const BipartiteGraph& g, const KatzConfig& cfg);

// Reference route for the series: S = (I - beta M)^{-1} - I by dense solve.
Matrix katz_dense_solve(const kernels::Csr& m, double beta);

// alpha-th percentile (linear interpolation) over the account–account
// upper-triangle entries of S. Page rows never enter the percentile.
double percentile_threshold(const SimilarityMatrix& s, double alpha);

struct UnsupervisedPredictions {
    std::vector<std::pair<int, int>> pairs; // account index pairs, u < v
    std::vector<double> score;              // S[u][v], the AUC ranking score
    std::vector<int8_t> label;              // 1 if score > threshold
    double threshold = 0.0;
};

UnsupervisedPredictions predict_unsupervised(const SimilarityMatrix& s, double alpha);

double account_pair_max(const SimilarityMatrix& s);

// max(S) - S[u][v] + epsilon over account pairs: a distance-like positive
// scalar, larger = less similar. smax must be account_pair_max(s).
double katz_pair_feature(const SimilarityMatrix& s, double smax, int u, int v,
                         double epsilon = 1e-6);

} // namespace sockspot
