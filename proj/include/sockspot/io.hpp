#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sockspot/activity.hpp"
#include "sockspot/cluster.hpp"
#include "sockspot/graph.hpp"
#include "sockspot/katz.hpp"
#include "sockspot/skipgram.hpp"
#include "sockspot/truth.hpp"

namespace sockspot {

// graph dump: sorted `u,v,w` edge lines, round-trippable
void write_graph(const std::string& path, const BipartiteGraph& g);
BipartiteGraph load_graph(const std::string& path, bool weighted_view);

// similarity matrix: magic, n, beta, tol header then row-major doubles;
// num_accounts is re-attached by the caller (it comes from the graph)
void write_katz(const std::string& path, const SimilarityMatrix& s);
SimilarityMatrix load_katz(const std::string& path);

// embeddings: `n d` header line, then `node_id v1 ... vd`
void write_embeddings(const std::string& path, const EmbeddingMatrix& e);
EmbeddingMatrix load_embeddings(const std::string& path);

void write_clusters(const std::string& path, const ClusterAssignment& a);
ClusterAssignment load_clusters(const std::string& path);

void write_ownership(const std::string& path, const OwnershipMap& m);
OwnershipMap load_ownership(const std::string& path);

struct PredictionRow {
    std::string u;
    std::string v;
    double prob = 0.0;
    int label = 0;
    int source_cluster = -1;
};

void write_predictions(const std::string& path, const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> load_predictions(const std::string& path);

// training labels: `u,v,label`; conflicting duplicate pairs are fatal
void write_pair_labels(const std::string& path, const std::vector<std::pair<int, int>>& pairs,
                       const std::vector<std::string>& ids, const std::vector<int8_t>& labels);
std::map<std::pair<std::string, std::string>, int8_t> load_pair_labels(const std::string& path);

void write_text(const std::string& path, const std::string& content);
std::string format_double(double v); // lossless, stable formatting

} // namespace sockspot
