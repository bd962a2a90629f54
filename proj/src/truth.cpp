#include "sockspot/truth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sockspot/errors.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

namespace {

struct AccountBucket {
    std::string owner;
    std::vector<std::pair<std::string, int64_t>> pages; // sorted page -> weight
    int64_t total_units = 0;
};

std::string split_id(const std::string& account, int k) {
    char buf[16];
    snprintf(buf, sizeof(buf), "~%02d", k);
    return account + buf;
}

} // namespace

SplitResult split_accounts(const std::vector<ActivityRecord>& records, const SplitConfig& cfg) {
    if (cfg.s < 1)
        throw ConfigError("split_accounts: s must be >= 1");

    std::map<std::string, AccountBucket> buckets; // sorted by account id
    for (const auto& r : records) {
        AccountBucket& b = buckets[r.account_id];
        if (!r.user_id.empty()) {
            if (b.owner.empty())
                b.owner = r.user_id;
            else if (b.owner != r.user_id)
                throw DataError("split_accounts: conflicting user_id for account '" +
                                r.account_id + "'");
        }
        b.total_units += r.weight;
        b.pages.push_back({r.page_id, r.weight});
    }
    std::unordered_set<std::string> all_accounts;
    for (const auto& [account, b] : buckets)
        all_accounts.insert(account);

    SplitResult out;
    for (auto& [account, b] : buckets) {
        std::sort(b.pages.begin(), b.pages.end());
        std::string owner = b.owner.empty() ? "u~" + account : b.owner;
        if (all_accounts.count(owner))
            throw DataError("split_accounts: owner id '" + owner + "' collides with an account id");

        if (cfg.s == 1 || b.total_units < cfg.min_activities) {
            for (const auto& [page, w] : b.pages)
                out.records.push_back({account, page, w, owner});
            out.ownership.owner_of[account] = owner;
            ++out.accounts_passed_through;
            continue;
        }

        Rng rng(derive_seed(cfg.seed, "split", fnv1a64(account)));
        // counts[k][page slot] = units of that page assigned to split k
        std::vector<std::vector<int64_t>> counts(cfg.s, std::vector<int64_t>(b.pages.size(), 0));
        std::vector<int64_t> split_total(cfg.s, 0);
        for (size_t pi = 0; pi < b.pages.size(); ++pi)
            for (int64_t unit = 0; unit < b.pages[pi].second; ++unit) {
                int k = static_cast<int>(rng.below(static_cast<uint64_t>(cfg.s)));
                ++counts[k][pi];
                ++split_total[k];
            }

        if (b.total_units >= cfg.s) {
            // repair empty splits by moving one unit from the currently largest
            for (int k = 0; k < cfg.s; ++k) {
                if (split_total[k] > 0)
                    continue;
                int donor = static_cast<int>(std::max_element(split_total.begin(), split_total.end()) -
                                             split_total.begin());
                size_t page_slot = static_cast<size_t>(
                    std::max_element(counts[donor].begin(), counts[donor].end()) -
                    counts[donor].begin());
                --counts[donor][page_slot];
                --split_total[donor];
                ++counts[k][page_slot];
                ++split_total[k];
            }
        }

        for (int k = 0; k < cfg.s; ++k) {
            if (split_total[k] == 0)
                continue; // dropped: fewer units than splits
            std::string sid = split_id(account, k);
            if (all_accounts.count(sid))
                throw DataError("split_accounts: generated id '" + sid +
                                "' collides with an existing account");
            for (size_t pi = 0; pi < b.pages.size(); ++pi)
                if (counts[k][pi] > 0)
                    out.records.push_back({sid, b.pages[pi].first, counts[k][pi], owner});
            out.ownership.owner_of[sid] = owner;
        }
        ++out.accounts_split;
    }
    return out;
}

std::vector<std::string> sample_queried_nodes(const std::vector<std::string>& accounts,
                                              double fraction, uint64_t seed) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw ConfigError("sample_queried_nodes: fraction must be in (0,1]");
    const size_t n = accounts.size();
    const size_t m = static_cast<size_t>(
        std::min<double>(static_cast<double>(n),
                         std::ceil(fraction * static_cast<double>(n))));
    std::vector<std::string> pool = accounts;
    std::sort(pool.begin(), pool.end());
    Rng rng(seed);
    rng.shuffle(pool);
    pool.resize(m);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<int8_t> label_pairs(const std::vector<std::pair<int, int>>& pairs,
                                const std::vector<std::string>& ids,
                                const std::unordered_set<std::string>& queried,
                                const OwnershipMap& truth) {
    std::vector<int8_t> labels(pairs.size(), -1);
    for (size_t i = 0; i < pairs.size(); ++i) {
        const std::string& a = ids[pairs[i].first];
        const std::string& b = ids[pairs[i].second];
        if (!queried.count(a) || !queried.count(b))
            continue;
        const std::string* oa = truth.find(a);
        const std::string* ob = truth.find(b);
        if (!oa)
            throw DataError("label_pairs: queried account '" + a + "' missing from ground truth");
        if (!ob)
            throw DataError("label_pairs: queried account '" + b + "' missing from ground truth");
        labels[i] = (*oa == *ob) ? 1 : 0;
    }
    return labels;
}

AltTruthResult alternative_ground_truth(const SimilarityMatrix& s, double high_pct,
                                        double low_pct,
                                        const std::vector<std::pair<int, int>>& pairs) {
    if (low_pct >= high_pct)
        throw ConfigError("alternative_ground_truth: low percentile must be below high");
    AltTruthResult out;
    out.high_value = percentile_threshold(s, high_pct);
    out.low_value = percentile_threshold(s, low_pct);
    if (out.high_value <= out.low_value)
        throw DataError("alternative_ground_truth: degenerate similarity values, thresholds cross");
    out.labels.assign(pairs.size(), -1);
    for (size_t i = 0; i < pairs.size(); ++i) {
        const double v = s.s.at(pairs[i].first, pairs[i].second);
        if (v > out.high_value) {
            out.labels[i] = 1;
            ++out.n_pos;
        } else if (v < out.low_value) {
            out.labels[i] = 0;
            ++out.n_neg;
        } else {
            ++out.n_unknown;
        }
    }
    return out;
}

std::vector<int8_t> merge_labels(const std::vector<int8_t>& real_labels,
                                 const std::vector<int8_t>& alt_labels, int64_t* conflicts) {
    if (real_labels.size() != alt_labels.size())
        throw DataError("merge_labels: length mismatch");
    std::vector<int8_t> out(real_labels.size());
    int64_t disagreements = 0;
    for (size_t i = 0; i < out.size(); ++i) {
        if (real_labels[i] >= 0) {
            if (alt_labels[i] >= 0 && alt_labels[i] != real_labels[i])
                ++disagreements;
            out[i] = real_labels[i]; // real truth wins
        } else {
            out[i] = alt_labels[i];
        }
    }
    if (conflicts)
        *conflicts = disagreements;
    return out;
}

} // namespace sockspot
