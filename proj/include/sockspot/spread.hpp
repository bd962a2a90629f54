#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sockspot/katz.hpp"
#include "sockspot/matrix.hpp"
#include "sockspot/pair_ops.hpp"
#include "sockspot/skipgram.hpp"

namespace sockspot {

// Produces the feature vector of one candidate pair on demand, so large pair
// sets never materialize a P×d matrix unless a route needs it.
class PairFeatureSource {
public:
    virtual ~PairFeatureSource() = default;
    virtual int dim() const = 0;
    virtual void gather(size_t pair_index, double* out) const = 0;
};

// scalar max(S) - S[u][v] + eps
class KatzFeatureSource : public PairFeatureSource {
public:
    KatzFeatureSource(const SimilarityMatrix& s, const std::vector<std::pair<int, int>>& pairs,
                      double epsilon = 1e-6);
    int dim() const override { return 1; }
    void gather(size_t pair_index, double* out) const override;

private:
    const SimilarityMatrix* s_;
    const std::vector<std::pair<int, int>>* pairs_;
    double smax_;
    double eps_;
};

// one of the Table operators applied to the endpoints' embedding rows
class EmbeddingFeatureSource : public PairFeatureSource {
public:
    EmbeddingFeatureSource(const EmbeddingMatrix& emb,
                           const std::vector<std::pair<int, int>>& pairs, PairOp op);
    int dim() const override { return pair_op_dim(op_, emb_->d); }
    void gather(size_t pair_index, double* out) const override;

private:
    const EmbeddingMatrix* emb_;
    const std::vector<std::pair<int, int>>* pairs_;
    PairOp op_;
};

// Candidate account pairs with features and {1,0,-1} labels.
struct PairDataset {
    std::vector<std::pair<int, int>> pairs; // u < v, indices into ids
    std::vector<std::string> ids;           // account ids
    std::vector<int8_t> labels;             // 1, 0, -1
    std::shared_ptr<PairFeatureSource> features;

    int feat_dim() const { return features ? features->dim() : 0; }
};

// Canonicalizes pairs (u<v, no self pairs, no duplicates) and merges labels
// from the map (missing -> -1).
PairDataset assemble_pairs(std::vector<std::string> ids, std::vector<std::pair<int, int>> pairs,
                           std::shared_ptr<PairFeatureSource> features,
                           const std::map<std::pair<int, int>, int8_t>& label_map);

struct SpreadConfig {
    double sigma = 0.0; // 0 = median heuristic over pairwise feature distances
    double clamp = 0.2; // retention of the propagated term; labels pull with 1-clamp
    double tol = 1e-6;
    int max_iter = 1000;
    int64_t pair_budget = 20000; // above this the affinity is kNN-sparsified
    int knn = 10;
};

struct SpreadResult {
    std::vector<double> prob; // probability of label 1
    std::vector<int8_t> hard;
    bool converged = true;
    int iterations = 0;
    double sigma = 0.0;
    bool used_knn = false;
};

// A[i][j] = exp(-|x_i-x_j|^2 / (2 sigma^2)) with a zeroed diagonal.
Matrix rbf_affinity(const Matrix& x, double sigma);

// Semi-supervised label spreading: F <- clamp * Snorm * F + (1-clamp) * Y
// with Snorm = D^{-1/2} A D^{-1/2}. Needs at least one 1 and one 0 label.
SpreadResult label_spread(const PairDataset& data, const SpreadConfig& cfg);

// median-heuristic sigma over the dataset's pairwise feature distances
// (exact up to 2000 samples, seeded subsampling beyond)
double median_heuristic_sigma(const PairFeatureSource& features, size_t count);

} // namespace sockspot
