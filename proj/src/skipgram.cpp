#include "sockspot/skipgram.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

#include "sockspot/errors.hpp"
#include "sockspot/node2vec.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

namespace {

constexpr int kExpTableSize = 1000;
constexpr double kMaxExp = 6.0;

struct SigmoidTable {
    float v[kExpTableSize];
    SigmoidTable() {
        for (int i = 0; i < kExpTableSize; ++i) {
            double x = (2.0 * i / kExpTableSize - 1.0) * kMaxExp;
            double e = std::exp(x);
            v[i] = static_cast<float>(e / (1.0 + e));
        }
    }
    float operator()(float f) const {
        if (f >= kMaxExp)
            return 1.0f;
        if (f <= -kMaxExp)
            return 0.0f;
        int i = static_cast<int>((f + kMaxExp) * (kExpTableSize / (2.0 * kMaxExp)));
        return v[i];
    }
};

double pair_loss(float f_pos_sigma, bool positive) {
    double s = positive ? f_pos_sigma : 1.0 - f_pos_sigma;
    s = std::min(std::max(s, 1e-7), 1.0 - 1e-7);
    return -std::log(s);
}

} // namespace

EmbeddingMatrix train_skipgram(const std::vector<std::vector<int>>& walks, int n_nodes,
                               const SkipgramConfig& cfg, SkipgramStats* stats) {
    if (cfg.d < 1)
        throw ConfigError("skipgram: d must be >= 1");
    if (cfg.window < 1 || cfg.negatives < 0 || cfg.epochs < 1)
        throw ConfigError("skipgram: bad window/negatives/epochs");
    if (walks.empty())
        throw ConfigError("skipgram: no walks to train on");

    const int d = cfg.d;
    std::vector<int64_t> freq(n_nodes, 0);
    int64_t total_positions = 0;
    for (const auto& w : walks) {
        total_positions += static_cast<int64_t>(w.size());
        for (int v : w) {
            if (v < 0 || v >= n_nodes)
                throw DataError("skipgram: walk refers to node outside [0, n)");
            ++freq[v];
        }
    }

    // unigram^0.75 negative table over nodes that occur at all
    std::vector<int> vocab;
    std::vector<double> neg_weight;
    for (int v = 0; v < n_nodes; ++v)
        if (freq[v] > 0) {
            vocab.push_back(v);
            neg_weight.push_back(std::pow(static_cast<double>(freq[v]), 0.75));
        }
    if (vocab.empty())
        throw ConfigError("skipgram: all walks are empty");
    AliasTable neg_table = AliasTable::build(neg_weight);

    std::vector<float> w_in(static_cast<size_t>(n_nodes) * d);
    std::vector<float> w_out(static_cast<size_t>(n_nodes) * d, 0.0f);
    for (int v = 0; v < n_nodes; ++v)
        for (int j = 0; j < d; ++j) {
            uint64_t h = splitmix64(cfg.seed ^ splitmix64(static_cast<uint64_t>(v) * d + j));
            double u = static_cast<double>(h >> 11) * 0x1.0p-53;
            w_in[static_cast<size_t>(v) * d + j] = static_cast<float>((u - 0.5) / d);
        }

    static const SigmoidTable sigmoid;
    const double min_lr = cfg.lr * 1e-4;
    const int64_t total_work = total_positions * cfg.epochs;
    const int64_t n_walks = static_cast<int64_t>(walks.size());

    if (stats) {
        stats->epoch_loss.clear();
        stats->pairs_trained = 0;
    }

    std::vector<int64_t> order(n_walks);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        Rng order_rng(derive_seed(cfg.seed, "epoch-order", static_cast<uint64_t>(epoch)));
        order_rng.shuffle(order);

        // position count already completed before each walk, for the lr decay
        std::vector<int64_t> done_before(n_walks, 0);
        int64_t acc = static_cast<int64_t>(epoch) * total_positions;
        for (int64_t t = 0; t < n_walks; ++t) {
            done_before[t] = acc;
            acc += static_cast<int64_t>(walks[order[t]].size());
        }

        double epoch_loss = 0.0;
        int64_t epoch_pairs = 0;

#pragma omp parallel for schedule(dynamic, 8) num_threads(cfg.threads) \
    reduction(+ : epoch_loss, epoch_pairs)
        for (int64_t t = 0; t < n_walks; ++t) {
            const std::vector<int>& walk = walks[order[t]];
            if (walk.size() < 2)
                continue;
            Rng rng(derive_seed(cfg.seed, "train",
                                static_cast<uint64_t>(epoch) * n_walks + static_cast<uint64_t>(order[t])));
            const double progress = static_cast<double>(done_before[t]) / static_cast<double>(total_work);
            const float lr = static_cast<float>(std::max(min_lr, cfg.lr * (1.0 - progress)));
            std::vector<float> grad_center(d);

            const int len = static_cast<int>(walk.size());
            for (int i = 0; i < len; ++i) {
                const int center = walk[i];
                const int b = 1 + static_cast<int>(rng.below(cfg.window));
                for (int j = std::max(0, i - b); j <= std::min(len - 1, i + b); ++j) {
                    if (j == i)
                        continue;
                    const int context = walk[j];
                    float* vc = w_in.data() + static_cast<size_t>(center) * d;
                    std::fill(grad_center.begin(), grad_center.end(), 0.0f);

                    for (int s = 0; s <= cfg.negatives; ++s) {
                        int target;
                        float label;
                        if (s == 0) {
                            target = context;
                            label = 1.0f;
                        } else {
                            target = vocab[neg_table.draw(rng)];
                            if (target == context)
                                continue;
                            label = 0.0f;
                        }
                        float* vt = w_out.data() + static_cast<size_t>(target) * d;
                        float f = 0.0f;
                        for (int k = 0; k < d; ++k)
                            f += vc[k] * vt[k];
                        const float sig = sigmoid(f);
                        const float g = (label - sig) * lr;
                        for (int k = 0; k < d; ++k) {
                            grad_center[k] += g * vt[k];
                            vt[k] += g * vc[k];
                        }
                        epoch_loss += pair_loss(sig, label > 0.5f);
                    }
                    for (int k = 0; k < d; ++k)
                        vc[k] += grad_center[k];
                    ++epoch_pairs;
                }
            }
        }
        if (stats) {
            stats->epoch_loss.push_back(epoch_pairs > 0 ? epoch_loss / static_cast<double>(epoch_pairs)
                                                        : 0.0);
            stats->pairs_trained += epoch_pairs;
        }
    }

    EmbeddingMatrix out;
    out.d = d;
    out.w = Matrix(n_nodes, d);
    for (int v = 0; v < n_nodes; ++v) {
        if (freq[v] == 0) {
            if (stats)
                stats->silent_nodes.push_back(v);
            continue; // zero vector
        }
        for (int j = 0; j < d; ++j)
            out.w.at(v, j) = static_cast<double>(w_in[static_cast<size_t>(v) * d + j]);
    }
    return out;
}

} // namespace sockspot
