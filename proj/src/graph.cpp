#include "sockspot/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sockspot/errors.hpp"

namespace sockspot {

int BipartiteGraph::account_index(const std::string& id) const {
    auto it = std::lower_bound(accounts.begin(), accounts.end(), id);
    if (it == accounts.end() || *it != id)
        return -1;
    return static_cast<int>(it - accounts.begin());
}

bool BipartiteGraph::has_edge(int a, int b) const {
    auto begin = adj.begin() + row_begin(a);
    auto end = adj.begin() + row_end(a);
    return std::binary_search(begin, end, b);
}

kernels::Csr BipartiteGraph::adjacency() const {
    kernels::Csr m;
    m.n = num_nodes();
    m.offsets = adj_offsets;
    m.idx = adj;
    m.val.resize(adj.size());
    for (size_t e = 0; e < adj.size(); ++e)
        m.val[e] = weighted_view ? static_cast<double>(weights[e]) : 1.0;
    return m;
}

BipartiteGraph build_bipartite(const std::vector<ActivityRecord>& records) {
    BipartiteGraph g;
    std::set<std::string> accounts, pages;
    for (const auto& r : records) {
        accounts.insert(r.account_id);
        pages.insert(r.page_id);
    }
    for (const auto& a : accounts)
        if (pages.count(a))
            throw DataError("token appears as both account and page: '" + a + "'");

    g.accounts.assign(accounts.begin(), accounts.end());
    g.pages.assign(pages.begin(), pages.end());

    const int na = g.num_accounts();
    const int n = g.num_nodes();

    std::unordered_map<std::string, int> index;
    index.reserve(static_cast<size_t>(n));
    for (int i = 0; i < na; ++i)
        index[g.accounts[i]] = i;
    for (int i = na; i < n; ++i)
        index[g.pages[i - na]] = i;

    // aggregate edge weights; records already aggregate duplicates but the
    // graph does not rely on that
    std::map<std::pair<int, int>, int64_t> edge_weight;
    for (const auto& r : records) {
        int u = index[r.account_id];
        int v = index[r.page_id];
        edge_weight[{u, v}] += r.weight;
    }

    std::vector<int> deg(n, 0);
    for (const auto& [e, w] : edge_weight) {
        ++deg[e.first];
        ++deg[e.second];
    }
    g.adj_offsets.assign(n + 1, 0);
    for (int i = 0; i < n; ++i)
        g.adj_offsets[i + 1] = g.adj_offsets[i] + deg[i];
    g.adj.resize(g.adj_offsets[n]);
    g.weights.resize(g.adj_offsets[n]);

    std::vector<int64_t> fill(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
    for (const auto& [e, w] : edge_weight) {
        g.adj[fill[e.first]] = e.second;
        g.weights[fill[e.first]++] = w;
        g.adj[fill[e.second]] = e.first;
        g.weights[fill[e.second]++] = w;
    }
    // map iteration is (u,v)-sorted, so account rows are already ascending;
    // page rows get their account neighbours in ascending order too.
    return g;
}

ProjectedGraph project_accounts(const BipartiteGraph& g) {
    ProjectedGraph p;
    p.nodes = g.accounts;
    const int na = g.num_accounts();
    p.nbrs.assign(na, {});

    std::unordered_map<int64_t, int> common; // (u<<32)|v with u<v -> count
    for (int page = na; page < g.num_nodes(); ++page) {
        for (int64_t e1 = g.row_begin(page); e1 < g.row_end(page); ++e1) {
            for (int64_t e2 = e1 + 1; e2 < g.row_end(page); ++e2) {
                int u = g.adj[e1];
                int v = g.adj[e2];
                ++common[(static_cast<int64_t>(u) << 32) | static_cast<uint32_t>(v)];
            }
        }
    }
    for (const auto& [key, cnt] : common) {
        int u = static_cast<int>(key >> 32);
        int v = static_cast<int>(key & 0xffffffff);
        p.nbrs[u].push_back({v, cnt});
        p.nbrs[v].push_back({u, cnt});
    }
    for (auto& row : p.nbrs)
        std::sort(row.begin(), row.end());
    return p;
}

int ProjectedGraph::weight(int u, int v) const {
    const auto& row = nbrs[u];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(v, 0));
    if (it == row.end() || it->first != v)
        return 0;
    return it->second;
}

std::vector<std::string> filter_low_degree(const ProjectedGraph& gp, int64_t v_size) {
    if (v_size < 1)
        throw ConfigError("filter_low_degree: v_size must be >= 1");
    const double threshold = std::log10(static_cast<double>(v_size));
    std::vector<std::string> kept;
    for (size_t i = 0; i < gp.nodes.size(); ++i)
        if (static_cast<double>(gp.degree(static_cast<int>(i))) > threshold)
            kept.push_back(gp.nodes[i]);
    return kept;
}

std::vector<ActivityRecord> restrict_records(const std::vector<ActivityRecord>& records,
                                             const std::vector<std::string>& keep) {
    std::unordered_set<std::string> keep_set(keep.begin(), keep.end());
    std::vector<ActivityRecord> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (keep_set.count(r.account_id))
            out.push_back(r);
    return out;
}

} // namespace sockspot
