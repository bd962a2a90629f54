#include "sockspot/sweep.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "sockspot/errors.hpp"
#include "sockspot/rng.hpp"
#include "sockspot/truth.hpp"

namespace sockspot {

namespace {

// users below the activity floor are dropped, mirroring the election-style
// setup the density/splits analyses are built on
std::vector<ActivityRecord> eligible_users_only(const std::vector<ActivityRecord>& records,
                                                int64_t min_activities) {
    std::map<std::string, int64_t> units;
    for (const auto& r : records)
        units[r.account_id] += r.weight;
    std::vector<ActivityRecord> out;
    for (const auto& r : records)
        if (units[r.account_id] >= min_activities)
            out.push_back(r);
    return out;
}

// per-user subsample without replacement down to target_units
std::vector<ActivityRecord> subsample_units(const std::vector<ActivityRecord>& records,
                                            int64_t target_units, uint64_t seed) {
    std::map<std::string, std::vector<std::pair<std::string, int64_t>>> by_account;
    std::map<std::string, std::string> user_of;
    for (const auto& r : records) {
        by_account[r.account_id].push_back({r.page_id, r.weight});
        if (!r.user_id.empty())
            user_of[r.account_id] = r.user_id;
    }
    std::vector<ActivityRecord> out;
    for (auto& [account, pages] : by_account) {
        std::sort(pages.begin(), pages.end());
        int64_t total = 0;
        for (const auto& [page, w] : pages)
            total += w;
        if (total <= target_units) {
            for (const auto& [page, w] : pages)
                out.push_back({account, page, w, user_of.count(account) ? user_of[account] : ""});
            continue;
        }
        std::vector<int> slots(total); // page slot per unit
        int64_t at = 0;
        for (size_t pi = 0; pi < pages.size(); ++pi)
            for (int64_t u = 0; u < pages[pi].second; ++u)
                slots[at++] = static_cast<int>(pi);
        Rng rng(derive_seed(seed, "density", fnv1a64(account)));
        rng.shuffle(slots);
        std::map<int, int64_t> counts;
        for (int64_t u = 0; u < target_units; ++u)
            ++counts[slots[u]];
        for (const auto& [pi, w] : counts)
            out.push_back({account, pages[pi].first, w,
                           user_of.count(account) ? user_of[account] : ""});
    }
    return out;
}

} // namespace

std::vector<SweepRow> run_sweep(const PipelineConfig& base, const std::string& parameter,
                                const std::vector<std::string>& values) {
    if (values.empty())
        throw ConfigError("sweep: no values given");
    const bool resplits = parameter == "density" || parameter == "splits";

    std::vector<ActivityRecord> raw;
    if (base.input.empty())
        throw ConfigError("sweep: no input configured");
    raw = load_activities(base.input, base.format == "jsonl" ? ActivityFormat::Jsonl
                                                              : base.format == "csv"
                                                                  ? ActivityFormat::Csv
                                                                  : ActivityFormat::Auto);

    std::vector<ActivityRecord> eligible;
    if (resplits)
        eligible = eligible_users_only(raw, base.sweep_min_activities);

    std::vector<SweepRow> rows;
    for (const std::string& value : values) {
        PipelineConfig cfg = base;
        cfg.out_dir = base.out_dir + "/" + parameter + "=" + value;
        cfg.cache_dir = base.out_dir + "/cache";

        std::vector<ActivityRecord> records;
        if (parameter == "alpha") {
            cfg.method = "unsup-katz"; // the threshold sweep probes Algorithm 1
            cfg.alpha = std::stod(value);
            records = raw;
        } else if (parameter == "d") {
            cfg.d = std::stoi(value);
            records = raw;
        } else if (parameter == "pq") {
            const size_t sep = value.find(':');
            if (sep == std::string::npos)
                throw ConfigError("sweep pq values look like 'p:q', got '" + value + "'");
            cfg.p = std::stod(value.substr(0, sep));
            cfg.q = std::stod(value.substr(sep + 1));
            records = raw;
        } else if (parameter == "clusters") {
            cfg.clusters = std::stoi(value);
            records = raw;
        } else if (parameter == "splits") {
            SplitConfig sc;
            sc.s = std::stoi(value);
            sc.min_activities = 1; // the eligibility floor already applied
            sc.seed = derive_seed(base.seed, "sweep-split");
            records = split_accounts(eligible, sc).records;
        } else if (parameter == "density") {
            const double per_account = std::stod(value);
            const int64_t per_user =
                static_cast<int64_t>(per_account * static_cast<double>(base.sweep_s));
            SplitConfig sc;
            sc.s = base.sweep_s;
            sc.min_activities = 1;
            sc.seed = derive_seed(base.seed, "sweep-split");
            records =
                split_accounts(subsample_units(eligible, per_user, base.seed), sc).records;
        } else {
            throw ConfigError("unknown sweep parameter '" + parameter +
                              "' (density|splits|alpha|d|pq|clusters)");
        }

        std::cerr << "[sweep] " << parameter << " = " << value << "\n";
        SweepRow row;
        row.value = value;
        row.result = run_pipeline_records(cfg, std::move(records));
        rows.push_back(std::move(row));
    }

    std::ostringstream csv;
    csv << "parameter,value," << report_csv_header() << ",candidate_pairs,truth_queries\n";
    for (const auto& row : rows) {
        csv << parameter << ',' << row.value << ',' << report_csv_row(row.result.report) << ','
            << row.result.candidate_pair_count << ',' << row.result.truth_queries << '\n';
    }
    std::filesystem::create_directories(base.out_dir);
    write_text(base.out_dir + "/sweep.csv", csv.str());
    return rows;
}

} // namespace sockspot
