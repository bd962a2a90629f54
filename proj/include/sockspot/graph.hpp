#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sockspot/activity.hpp"
#include "sockspot/kernels.hpp"

namespace sockspot {

// Undirected bipartite account–page graph. Node indices are assigned by
// lexicographic id sort, accounts first: accounts occupy [0, num_accounts),
// pages [num_accounts, num_nodes). That keeps matrix indices reproducible
// for identical input regardless of record order.
struct BipartiteGraph {
    std::vector<std::string> accounts; // sorted
    std::vector<std::string> pages;    // sorted

    std::vector<int64_t> adj_offsets; // num_nodes()+1
    std::vector<int> adj;             // neighbour node indices, ascending per row
    std::vector<int64_t> weights;     // aggregated activity counts, parallel to adj

    bool weighted_view = false;

    int num_accounts() const { return static_cast<int>(accounts.size()); }
    int num_pages() const { return static_cast<int>(pages.size()); }
    int num_nodes() const { return num_accounts() + num_pages(); }
    int64_t num_edges() const { return static_cast<int64_t>(adj.size()) / 2; }

    bool is_account(int node) const { return node < num_accounts(); }
    const std::string& node_id(int node) const {
        return is_account(node) ? accounts[node] : pages[node - num_accounts()];
    }

    int degree(int node) const {
        return static_cast<int>(adj_offsets[node + 1] - adj_offsets[node]);
    }
    int64_t edge_weight(int64_t slot) const { return weighted_view ? weights[slot] : 1; }

    // -1 when absent
    int account_index(const std::string& id) const;
    // neighbour slot range helpers
    int64_t row_begin(int node) const { return adj_offsets[node]; }
    int64_t row_end(int node) const { return adj_offsets[node + 1]; }
    bool has_edge(int a, int b) const;

    // adjacency in CSR form honouring the active weight view
    kernels::Csr adjacency() const;
};

// Account-side projection: edge (u,v) with weight w iff u and v share
// exactly w >= 1 page neighbours.
struct ProjectedGraph {
    std::vector<std::string> nodes; // account ids, same order as source graph
    std::vector<std::vector<std::pair<int, int>>> nbrs; // (account idx, common pages)

    int degree(int account) const { return static_cast<int>(nbrs[account].size()); }
    int weight(int u, int v) const; // 0 when no edge
};

BipartiteGraph build_bipartite(const std::vector<ActivityRecord>& records);

ProjectedGraph project_accounts(const BipartiteGraph& g);

// Accounts whose projected degree exceeds log10(v_size); v_size is |V| of
// the original bipartite graph. Returned in id-sorted order.
std::vector<std::string> filter_low_degree(const ProjectedGraph& gp, int64_t v_size);

// Drops all activities of accounts outside `keep` and rebuilds the graph.
std::vector<ActivityRecord> restrict_records(const std::vector<ActivityRecord>& records,
                                             const std::vector<std::string>& keep);

} // namespace sockspot
