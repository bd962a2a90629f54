#include "support/fixtures.hpp"

#include <cstdio>
#include <stdexcept>
#include <unistd.h>

#include "sockspot/synth.hpp"

namespace sockspot::testing {

kernels::Csr csr_from_dense(const Matrix& m) {
    kernels::Csr c;
    c.n = m.rows;
    c.offsets.assign(m.rows + 1, 0);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j)
            if (m.at(i, j) != 0.0)
                ++c.offsets[i + 1];
        c.offsets[i + 1] += c.offsets[i];
    }
    c.idx.resize(c.offsets[m.rows]);
    c.val.resize(c.offsets[m.rows]);
    int64_t at = 0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m.at(i, j) != 0.0) {
                c.idx[at] = j;
                c.val[at++] = m.at(i, j);
            }
    return c;
}

Matrix dense_from_csr(const kernels::Csr& m) {
    Matrix d(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int64_t e = m.offsets[i]; e < m.offsets[i + 1]; ++e)
            d.at(i, m.idx[e]) = m.val[e];
    return d;
}

Matrix random_symmetric_adjacency(int n, double density, Rng& rng) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < density) {
                m.at(i, j) = 1.0;
                m.at(j, i) = 1.0;
            }
    return m;
}

std::vector<ActivityRecord> dataset1_fixture() {
    // 156 users owning 188 accounts: 128 singles, 24 doubles, 4 triples.
    // The first 74 accounts (sorted order) carry two distinct pages, the
    // rest one, for exactly 262 aggregated activities.
    std::vector<ActivityRecord> out;
    char abuf[16], ubuf[16], pbuf[16];
    int account_no = 0;
    std::vector<std::pair<std::string, std::string>> accounts; // id, owner
    for (int u = 0; u < 156; ++u) {
        int n_accounts = u < 128 ? 1 : u < 152 ? 2 : 3;
        snprintf(ubuf, sizeof(ubuf), "user%03d", u);
        for (int a = 0; a < n_accounts; ++a) {
            snprintf(abuf, sizeof(abuf), "acc%03d", account_no++);
            accounts.push_back({abuf, ubuf});
        }
    }
    // per-user page pool: two pages keyed by the user index
    int emitted = 0;
    for (size_t i = 0; i < accounts.size(); ++i) {
        const auto& [account, owner] = accounts[i];
        int user_idx = std::stoi(owner.substr(4));
        int base_page = (user_idx * 7) % 37;
        snprintf(pbuf, sizeof(pbuf), "page%02d", base_page);
        out.push_back({account, pbuf, 1, owner});
        ++emitted;
        if (i < 74) {
            snprintf(pbuf, sizeof(pbuf), "page%02d", (base_page + 1 + user_idx % 3) % 37);
            out.push_back({account, pbuf, 1, owner});
            ++emitted;
        }
    }
    if (emitted != 262 || account_no != 188)
        throw std::logic_error("dataset1 fixture drifted");
    return out;
}

MiniBenchmark mini_benchmark(uint64_t seed) {
    SynthConfig sc;
    sc.users = 60;
    sc.heavy_users = 6;
    sc.heavy_activities = 260;
    sc.light_activities = 25;
    sc.pages = 60;
    sc.pool_min = 3;
    sc.pool_max = 6;
    sc.zipf = 0.7;
    sc.seed = seed;
    auto raw = synth_activities(sc);
    SplitConfig split;
    split.s = 5;
    split.min_activities = 150;
    split.seed = seed + 1;
    SplitResult r = split_accounts(raw, split);
    return {std::move(r.records), std::move(r.ownership)};
}

TempDir::TempDir(const std::string& tag) {
    path_ = (std::filesystem::temp_directory_path() /
             ("sockspot_test_" + tag + "_" + std::to_string(::getpid())))
                .string();
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() { std::filesystem::remove_all(path_); }

} // namespace sockspot::testing
