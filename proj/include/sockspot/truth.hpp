#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sockspot/activity.hpp"
#include "sockspot/katz.hpp"

namespace sockspot {

// account id -> owner user id, total over all simulated accounts
struct OwnershipMap {
    std::map<std::string, std::string> owner_of;

    const std::string* find(const std::string& account) const {
        auto it = owner_of.find(account);
        return it == owner_of.end() ? nullptr : &it->second;
    }
    bool same_owner(const std::string& a, const std::string& b) const {
        const std::string* oa = find(a);
        const std::string* ob = find(b);
        return oa && ob && *oa == *ob;
    }
};

struct SplitConfig {
    int s = 15;                 // split accounts per eligible original account
    int64_t min_activities = 1; // originals below this pass through unsplit
    uint64_t seed = 7;
};

struct SplitResult {
    std::vector<ActivityRecord> records;
    OwnershipMap ownership;
    int64_t accounts_split = 0;
    int64_t accounts_passed_through = 0;
};

// Distributes each eligible account's activity units uniformly at random over
// s fresh account ids. When the unit count reaches s every split ends up
// non-empty (rare empty draws are repaired from the largest split); below s,
// empty splits are dropped. Owners come from user_id when present, otherwise
// a "u~<account>" token.
SplitResult split_accounts(const std::vector<ActivityRecord>& records, const SplitConfig& cfg);

// Uniform sample without replacement of ceil(fraction*n) accounts.
std::vector<std::string> sample_queried_nodes(const std::vector<std::string>& accounts,
                                              double fraction, uint64_t seed);

// 1 if both endpoints queried with the same owner, 0 if queried with
// different owners, -1 otherwise. A queried account missing from truth is
// fatal.
std::vector<int8_t> label_pairs(const std::vector<std::pair<int, int>>& pairs,
                                const std::vector<std::string>& ids,
                                const std::unordered_set<std::string>& queried,
                                const OwnershipMap& truth);

struct AltTruthResult {
    std::vector<int8_t> labels;
    double high_value = 0.0;
    double low_value = 0.0;
    int64_t n_pos = 0;
    int64_t n_neg = 0;
    int64_t n_unknown = 0;
};

// High-confidence labels from extreme similarity percentiles: pairs above the
// high percentile are 1, below the low percentile are 0, -1 in between.
AltTruthResult alternative_ground_truth(const SimilarityMatrix& s, double high_pct,
                                        double low_pct,
                                        const std::vector<std::pair<int, int>>& pairs);

// Real labels win over alternative ones; disagreements are counted.
std::vector<int8_t> merge_labels(const std::vector<int8_t>& real_labels,
                                 const std::vector<int8_t>& alt_labels, int64_t* conflicts);

} // namespace sockspot
