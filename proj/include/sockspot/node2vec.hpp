#pragma once

#include <cstdint>
#include <vector>

#include "sockspot/kernels.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

struct WalkConfig {
    double p = 0.25;      // return parameter; low p keeps walks local
    double q = 4.0;       // in-out parameter; q > 1 biases toward breadth
    int num_walks = 10;   // walks started per node
    int walk_length = 80; // nodes per walk (start included)
    uint64_t seed = 1;
};

// O(1) draw from a fixed discrete distribution (Vose alias method).
struct AliasTable {
    std::vector<double> prob;
    std::vector<int> alias;

    static AliasTable build(const std::vector<double>& weights);
    bool empty() const { return prob.empty(); }
    int draw(Rng& rng) const;
};

// Second-order biased walker. Transition weight from (prev -> cur) to x is
// w(cur,x) * 1/p if x == prev, * 1 if x is adjacent to prev, * 1/q otherwise.
// Steps are drawn exactly: a first-order alias proposal plus rejection on the
// p/q bias class, so no per-(edge,predecessor) tables are materialized.
class WalkSampler {
public:
    WalkSampler(const kernels::Csr& g, double p, double q);

    // conditional next-step distribution, aligned with the neighbour slots of
    // cur (g.idx[row range of cur]); prev = -1 means first step
    std::vector<double> step_distribution(int prev, int cur) const;

    // exact sample from step_distribution; -1 when cur is isolated
    int sample_step(int prev, int cur, Rng& rng) const;

    const kernels::Csr& graph() const { return *g_; }

private:
    const kernels::Csr* g_;
    double inv_p_;
    double inv_q_;
    double bias_max_;
    std::vector<AliasTable> first_order_;

    bool has_edge(int a, int b) const;
    double bias(int prev, int x) const;
};

// num_walks walks per start node, each of up to walk_length nodes (shorter
// only when a walk hits an isolated node). Walk w of node v sits at slot
// v*num_walks+w and is generated from its own derived seed, so the output is
// identical no matter how many threads run.
std::vector<std::vector<int>> generate_walks(const kernels::Csr& g, const WalkConfig& cfg);

} // namespace sockspot
