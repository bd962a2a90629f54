#include "sockspot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_set>

#include "sockspot/errors.hpp"
#include "sockspot/node2vec.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

std::vector<ActivityRecord> synth_activities(const SynthConfig& cfg) {
    if (cfg.users < 1 || cfg.pages < 1)
        throw ConfigError("synth: users and pages must be >= 1");
    if (cfg.pool_min < 1 || cfg.pool_max < cfg.pool_min || cfg.pool_max > cfg.pages)
        throw ConfigError("synth: bad pool bounds");
    if (cfg.heavy_users > cfg.users)
        throw ConfigError("synth: more heavy users than users");

    std::vector<double> popularity(cfg.pages);
    for (int i = 0; i < cfg.pages; ++i)
        popularity[i] = 1.0 / std::pow(static_cast<double>(i + 1), cfg.zipf);
    AliasTable page_table = AliasTable::build(popularity);

    char buf[32];
    std::vector<ActivityRecord> out;
    for (int u = 0; u < cfg.users; ++u) {
        Rng rng(derive_seed(cfg.seed, "synth-user", static_cast<uint64_t>(u)));
        const bool heavy = u < cfg.heavy_users;

        const int pool_size =
            cfg.pool_min + static_cast<int>(rng.below(cfg.pool_max - cfg.pool_min + 1));
        std::unordered_set<int> pool_set;
        while (static_cast<int>(pool_set.size()) < pool_size)
            pool_set.insert(page_table.draw(rng));
        std::vector<int> pool(pool_set.begin(), pool_set.end());
        std::sort(pool.begin(), pool.end());

        // per-user taste over the pool
        std::vector<double> taste(pool.size());
        for (auto& t : taste)
            t = rng.uniform(0.5, 2.0);
        AliasTable taste_table = AliasTable::build(taste);

        const double mean = heavy ? cfg.heavy_activities : cfg.light_activities;
        const int n_acts =
            std::max(1, static_cast<int>(std::llround(mean * rng.uniform(0.85, 1.15))));

        std::map<int, int64_t> page_hits;
        for (int a = 0; a < n_acts; ++a)
            ++page_hits[pool[taste_table.draw(rng)]];

        snprintf(buf, sizeof(buf), "a%05d", u);
        std::string account = buf;
        snprintf(buf, sizeof(buf), "u%05d", u);
        std::string user = buf;
        for (const auto& [page, hits] : page_hits) {
            snprintf(buf, sizeof(buf), "p%04d", page);
            out.push_back({account, buf, hits, user});
        }
    }
    return out;
}

} // namespace sockspot
