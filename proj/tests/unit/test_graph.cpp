#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "sockspot/activity.hpp"
#include "sockspot/errors.hpp"
#include "sockspot/graph.hpp"
#include "sockspot/io.hpp"
#include "sockspot/rng.hpp"
#include "support/fixtures.hpp"

using namespace sockspot;
using namespace sockspot::testing;

namespace {

std::vector<ActivityRecord> parse_csv_text(const std::string& text, ParseStats* stats = nullptr) {
    std::istringstream in(text);
    return parse_activities(in, ActivityFormat::Csv, stats);
}

} // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("csv duplicates aggregate by weight") {
    auto records = parse_csv_text("account_id,page_id\na1,p1\na1,p1\na2,p1\n");
    REQUIRE(records.size() == 2);
    CHECK(records[0].account_id == "a1");
    CHECK(records[0].weight == 2);
    CHECK(records[1].account_id == "a2");
    CHECK(records[1].weight == 1);
}

TEST_CASE("empty account id rejects the line but not the file") {
    ParseStats stats;
    auto records = parse_csv_text("account_id,page_id\n,p1\na2,p2\n", &stats);
    CHECK(records.size() == 1);
    CHECK(stats.rejected_lines == 1);
}

TEST_CASE("missing required column is a config error; empty input is fine") {
    std::istringstream in("account,page\na,b\n");
    CHECK_THROWS_AS(parse_activities(in, ActivityFormat::Csv), ConfigError);
    std::istringstream empty("");
    CHECK(parse_activities(empty, ActivityFormat::Csv).empty());
}

TEST_CASE("jsonl parses the same keys and counts bad lines") {
    std::istringstream in(
        "{\"account_id\":\"a1\",\"page_id\":\"p1\",\"weight\":3}\n"
        "not json at all\n"
        "{\"account_id\":\"a1\",\"page_id\":\"p1\"}\n");
    ParseStats stats;
    auto records = parse_activities(in, ActivityFormat::Jsonl, &stats);
    REQUIRE(records.size() == 1);
    CHECK(records[0].weight == 4);
    CHECK(stats.rejected_lines == 1);
}

TEST_CASE("dataset-1 shaped fixture: 262 activities over 188 accounts") {
    auto records = dataset1_fixture();
    CHECK(records.size() == 262);
    std::set<std::string> accounts;
    for (const auto& r : records)
        accounts.insert(r.account_id);
    CHECK(accounts.size() == 188);
}

TEST_CASE("build_bipartite: direct construction and bipartiteness") {
    auto g = build_bipartite(parse_csv_text("account_id,page_id\na1,p1\na1,p2\na2,p1\n"));
    CHECK(g.num_accounts() == 2);
    CHECK(g.num_pages() == 2);
    CHECK(g.num_edges() == 3);
    // no account-account or page-page edges, exhaustively
    for (int v = 0; v < g.num_nodes(); ++v)
        for (int64_t e = g.row_begin(v); e < g.row_end(v); ++e)
            CHECK(g.is_account(v) != g.is_account(g.adj[e]));
    // adjacency symmetric
    for (int v = 0; v < g.num_nodes(); ++v)
        for (int64_t e = g.row_begin(v); e < g.row_end(v); ++e)
            CHECK(g.has_edge(g.adj[e], v));
}

TEST_CASE("empty record list builds the empty graph") {
    auto g = build_bipartite({});
    CHECK(g.num_nodes() == 0);
    CHECK(g.num_edges() == 0);
}

TEST_CASE("a token in both namespaces is fatal") {
    CHECK_THROWS_AS(build_bipartite(parse_csv_text("account_id,page_id\na1,x\nx,p1\n")),
                    DataError);
}

TEST_CASE("record order never changes the built graphs") {
    auto records = dataset1_fixture();
    auto g1 = build_bipartite(records);
    Rng rng(3);
    rng.shuffle(records);
    auto g2 = build_bipartite(records);
    CHECK(g1.accounts == g2.accounts);
    CHECK(g1.pages == g2.pages);
    CHECK(g1.adj == g2.adj);
    CHECK(g1.weights == g2.weights);
}

TEST_CASE("projection: common neighbours and disjoint neighbourhoods") {
    auto g = build_bipartite(
        parse_csv_text("account_id,page_id\na1,p1\na1,p2\na2,p1\na2,p2\na3,p9\n"));
    ProjectedGraph p = project_accounts(g);
    CHECK(p.weight(0, 1) == 2); // a1, a2 share two pages
    CHECK(p.weight(0, 2) == 0);
    CHECK(p.weight(1, 2) == 0);
    CHECK(p.degree(2) == 0);
}

TEST_CASE("projection equals the exhaustive set-intersection oracle") {
    Rng rng(17);
    std::vector<ActivityRecord> records;
    char a[16], p[16];
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 10; ++j)
            if (rng.uniform01() < 0.25) {
                snprintf(a, sizeof(a), "a%02d", i);
                snprintf(p, sizeof(p), "p%02d", j);
                records.push_back({a, p, 1, ""});
            }
    auto g = build_bipartite(records);
    ProjectedGraph proj = project_accounts(g);

    const int na = g.num_accounts();
    for (int u = 0; u < na; ++u)
        for (int v = u + 1; v < na; ++v) {
            std::set<int> nu(g.adj.begin() + g.row_begin(u), g.adj.begin() + g.row_end(u));
            int common = 0;
            for (int64_t e = g.row_begin(v); e < g.row_end(v); ++e)
                common += nu.count(g.adj[e]);
            CHECK(proj.weight(u, v) == common);
        }

    // weight bounded by the smaller bipartite degree
    for (int u = 0; u < na; ++u)
        for (const auto& [v, w] : proj.nbrs[u])
            CHECK(w <= std::min(g.degree(u), g.degree(v)));

    // sum over projected weights = sum over pages of C(deg,2)
    int64_t left = 0;
    for (int u = 0; u < na; ++u)
        for (const auto& [v, w] : proj.nbrs[u])
            if (u < v)
                left += w;
    int64_t right = 0;
    for (int v = na; v < g.num_nodes(); ++v)
        right += static_cast<int64_t>(g.degree(v)) * (g.degree(v) - 1) / 2;
    CHECK(left == right);
}

TEST_CASE("degree filter thresholds") {
    SUBCASE("v_size 1000: degree 3 removed, degree 4 kept") {
        // star pattern: one hub page shared by 5 accounts gives degree 4
        std::vector<ActivityRecord> records;
        for (int i = 0; i < 5; ++i)
            records.push_back({"k" + std::to_string(i), "hub", 1, ""});
        for (int i = 0; i < 4; ++i)
            records.push_back({"r" + std::to_string(i), "small", 1, ""});
        auto g = build_bipartite(records);
        auto kept = filter_low_degree(project_accounts(g), 1000);
        // the 5 hub accounts have projected degree 4 (> 3), the others 3
        CHECK(kept.size() == 5);
        for (const auto& id : kept)
            CHECK(id[0] == 'k');
    }
    SUBCASE("v_size 10: isolated accounts always removed") {
        auto g = build_bipartite(parse_csv_text("account_id,page_id\na1,p1\na2,p2\n"));
        auto kept = filter_low_degree(project_accounts(g), 10);
        CHECK(kept.empty());
    }
    SUBCASE("retained set equals an oracle recomputation") {
        auto g = build_bipartite(dataset1_fixture());
        ProjectedGraph proj = project_accounts(g);
        auto kept = filter_low_degree(proj, g.num_nodes());
        const double thr = std::log10(static_cast<double>(g.num_nodes()));
        std::vector<std::string> want;
        for (size_t i = 0; i < proj.nodes.size(); ++i)
            if (proj.nbrs[i].size() > thr)
                want.push_back(proj.nodes[i]);
        CHECK(kept == want);
    }
}

TEST_CASE("graph dump round-trips") {
    TempDir tmp("graphio");
    auto g = build_bipartite(dataset1_fixture());
    write_graph(tmp.path() + "/g.csv", g);
    BipartiteGraph h = load_graph(tmp.path() + "/g.csv", false);
    CHECK(g.accounts == h.accounts);
    CHECK(g.pages == h.pages);
    CHECK(g.adj == h.adj);
    CHECK(g.weights == h.weights);
}

TEST_SUITE_END();
