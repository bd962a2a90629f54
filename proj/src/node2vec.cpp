#include "sockspot/node2vec.hpp"

#include <algorithm>
#include <cmath>

#include "sockspot/errors.hpp"

namespace sockspot {

AliasTable AliasTable::build(const std::vector<double>& weights) {
    AliasTable t;
    const int n = static_cast<int>(weights.size());
    if (n == 0)
        return t;
    double total = 0.0;
    for (double w : weights)
        total += w;
    if (total <= 0.0)
        throw DataError("alias table: weights sum to zero");

    t.prob.resize(n);
    t.alias.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<int> small, large;
    for (int i = 0; i < n; ++i) {
        scaled[i] = weights[i] * n / total;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        int s = small.back();
        small.pop_back();
        int l = large.back();
        large.pop_back();
        t.prob[s] = scaled[s];
        t.alias[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (int i : large)
        t.prob[i] = 1.0;
    for (int i : small)
        t.prob[i] = 1.0;
    return t;
}

int AliasTable::draw(Rng& rng) const {
    const int i = static_cast<int>(rng.below(prob.size()));
    return rng.uniform01() < prob[i] ? i : alias[i];
}

WalkSampler::WalkSampler(const kernels::Csr& g, double p, double q) : g_(&g) {
    if (p <= 0.0 || q <= 0.0)
        throw ConfigError("node2vec: p and q must be positive");
    inv_p_ = 1.0 / p;
    inv_q_ = 1.0 / q;
    bias_max_ = std::max({inv_p_, 1.0, inv_q_});
    first_order_.resize(g.n);
    std::vector<double> w;
    for (int v = 0; v < g.n; ++v) {
        w.assign(g.val.begin() + g.offsets[v], g.val.begin() + g.offsets[v + 1]);
        if (!w.empty())
            first_order_[v] = AliasTable::build(w);
    }
}

bool WalkSampler::has_edge(int a, int b) const {
    auto begin = g_->idx.begin() + g_->offsets[a];
    auto end = g_->idx.begin() + g_->offsets[a + 1];
    return std::binary_search(begin, end, b);
}

double WalkSampler::bias(int prev, int x) const {
    if (x == prev)
        return inv_p_; // distance 0: immediate return
    if (has_edge(prev, x))
        return 1.0; // distance 1
    return inv_q_; // distance 2
}

std::vector<double> WalkSampler::step_distribution(int prev, int cur) const {
    const int64_t begin = g_->offsets[cur];
    const int64_t end = g_->offsets[cur + 1];
    std::vector<double> probs(static_cast<size_t>(end - begin), 0.0);
    if (probs.empty())
        return probs;
    double total = 0.0;
    for (int64_t e = begin; e < end; ++e) {
        double w = g_->val[e];
        if (prev >= 0)
            w *= bias(prev, g_->idx[e]);
        probs[e - begin] = w;
        total += w;
    }
    for (double& v : probs)
        v /= total;
    return probs;
}

int WalkSampler::sample_step(int prev, int cur, Rng& rng) const {
    const AliasTable& table = first_order_[cur];
    if (table.empty())
        return -1;
    const int64_t begin = g_->offsets[cur];
    if (prev < 0)
        return g_->idx[begin + table.draw(rng)];
    // exact rejection against the bias class of the proposed neighbour
    for (;;) {
        const int slot = table.draw(rng);
        const int x = g_->idx[begin + slot];
        if (rng.uniform01() * bias_max_ < bias(prev, x))
            return x;
    }
}

std::vector<std::vector<int>> generate_walks(const kernels::Csr& g, const WalkConfig& cfg) {
    if (cfg.num_walks < 1 || cfg.walk_length < 1)
        throw ConfigError("node2vec: num_walks and walk_length must be >= 1");
    if (g.n == 0)
        throw ConfigError("node2vec: empty graph");

    WalkSampler sampler(g, cfg.p, cfg.q);
    const int64_t total = static_cast<int64_t>(g.n) * cfg.num_walks;
    std::vector<std::vector<int>> walks(total);

#pragma omp parallel for schedule(dynamic, 64)
    for (int64_t t = 0; t < total; ++t) {
        const int start = static_cast<int>(t / cfg.num_walks);
        Rng rng(derive_seed(cfg.seed, "walk", static_cast<uint64_t>(t)));
        std::vector<int>& walk = walks[t];
        walk.reserve(cfg.walk_length);
        walk.push_back(start);
        int prev = -1;
        int cur = start;
        for (int step = 1; step < cfg.walk_length; ++step) {
            const int next = sampler.sample_step(prev, cur, rng);
            if (next < 0)
                break; // isolated node, walk ends early
            walk.push_back(next);
            prev = cur;
            cur = next;
        }
    }
    return walks;
}

} // namespace sockspot
