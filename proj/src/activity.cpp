#include "sockspot/activity.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <unordered_map>

#include <json.hpp>

#include "sockspot/errors.hpp"

namespace sockspot {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

void note_reject(ParseStats* stats, const std::string& line) {
    if (!stats)
        return;
    ++stats->rejected_lines;
    if (stats->reject_samples.size() < 5)
        stats->reject_samples.push_back(line.substr(0, 120));
}

struct Aggregator {
    std::vector<ActivityRecord> records;
    std::unordered_map<std::string, size_t> index; // "account\npage" -> slot
    std::unordered_map<std::string, std::string> user_of;

    void add(std::string account, std::string page, int64_t weight, std::string user) {
        if (!user.empty()) {
            auto [it, fresh] = user_of.try_emplace(account, user);
            if (!fresh && it->second != user)
                throw DataError("conflicting user_id for account '" + account + "': '" +
                                it->second + "' vs '" + user + "'");
        }
        std::string key = account + '\n' + page;
        auto [it, fresh] = index.try_emplace(key, records.size());
        if (fresh) {
            records.push_back({std::move(account), std::move(page), weight, std::move(user)});
        } else {
            records[it->second].weight += weight;
            if (records[it->second].user_id.empty() && !user.empty())
                records[it->second].user_id = std::move(user);
        }
    }

    // accounts seen before their user_id row still get it
    void backfill_users() {
        for (auto& r : records) {
            if (r.user_id.empty()) {
                auto it = user_of.find(r.account_id);
                if (it != user_of.end())
                    r.user_id = it->second;
            }
        }
    }
};

std::vector<ActivityRecord> parse_csv(std::istream& in, ParseStats* stats) {
    std::string line;
    if (!std::getline(in, line))
        return {}; // empty input is an empty list, not an error

    auto header = split_csv_line(line);
    int col_account = -1, col_page = -1, col_weight = -1, col_user = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "account_id")
            col_account = static_cast<int>(i);
        else if (header[i] == "page_id")
            col_page = static_cast<int>(i);
        else if (header[i] == "weight")
            col_weight = static_cast<int>(i);
        else if (header[i] == "user_id")
            col_user = static_cast<int>(i);
    }
    if (col_account < 0 || col_page < 0)
        throw ConfigError("activity CSV header must declare account_id and page_id");

    Aggregator agg;
    while (std::getline(in, line)) {
        if (stats)
            ++stats->total_lines;
        if (line.empty() || line == "\r")
            continue;
        auto f = split_csv_line(line);
        if (f.size() != header.size()) {
            note_reject(stats, line);
            continue;
        }
        const std::string& account = f[col_account];
        const std::string& page = f[col_page];
        if (account.empty() || page.empty()) {
            note_reject(stats, line);
            continue;
        }
        int64_t weight = 1;
        if (col_weight >= 0 && !f[col_weight].empty()) {
            const std::string& w = f[col_weight];
            auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
            if (ec != std::errc() || p != w.data() + w.size() || weight < 1) {
                note_reject(stats, line);
                continue;
            }
        }
        std::string user;
        if (col_user >= 0 && static_cast<size_t>(col_user) < f.size())
            user = f[col_user];
        agg.add(account, page, weight, std::move(user));
    }
    agg.backfill_users();
    return std::move(agg.records);
}

std::vector<ActivityRecord> parse_jsonl(std::istream& in, ParseStats* stats) {
    Aggregator agg;
    std::string line;
    while (std::getline(in, line)) {
        if (stats)
            ++stats->total_lines;
        if (line.empty() || line == "\r")
            continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("account_id") ||
            !obj.contains("page_id") || !obj["account_id"].is_string() ||
            !obj["page_id"].is_string()) {
            note_reject(stats, line);
            continue;
        }
        std::string account = obj["account_id"].get<std::string>();
        std::string page = obj["page_id"].get<std::string>();
        if (account.empty() || page.empty()) {
            note_reject(stats, line);
            continue;
        }
        int64_t weight = 1;
        if (obj.contains("weight")) {
            if (!obj["weight"].is_number_integer() || obj["weight"].get<int64_t>() < 1) {
                note_reject(stats, line);
                continue;
            }
            weight = obj["weight"].get<int64_t>();
        }
        std::string user;
        if (obj.contains("user_id") && obj["user_id"].is_string())
            user = obj["user_id"].get<std::string>();
        agg.add(std::move(account), std::move(page), weight, std::move(user));
    }
    agg.backfill_users();
    return std::move(agg.records);
}

} // namespace

std::vector<ActivityRecord> parse_activities(std::istream& in, ActivityFormat format,
                                             ParseStats* stats) {
    if (format == ActivityFormat::Jsonl)
        return parse_jsonl(in, stats);
    return parse_csv(in, stats);
}

std::vector<ActivityRecord> load_activities(const std::string& path, ActivityFormat format,
                                            ParseStats* stats) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open activity file: " + path);
    if (format == ActivityFormat::Auto)
        format = path.size() > 6 && path.substr(path.size() - 6) == ".jsonl" ? ActivityFormat::Jsonl
                                                                             : ActivityFormat::Csv;
    return parse_activities(in, format, stats);
}

void write_activities_csv(const std::string& path, const std::vector<ActivityRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write activity file: " + path);
    bool have_users = std::any_of(records.begin(), records.end(),
                                  [](const ActivityRecord& r) { return !r.user_id.empty(); });
    out << (have_users ? "account_id,page_id,weight,user_id\n" : "account_id,page_id,weight\n");
    for (const auto& r : records) {
        out << r.account_id << ',' << r.page_id << ',' << r.weight;
        if (have_users)
            out << ',' << r.user_id;
        out << '\n';
    }
}

} // namespace sockspot
