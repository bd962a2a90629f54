#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sockspot {

// One account→page interaction (comment or like), the ingestion atom.
// weight aggregates duplicate (account, page) rows; user_id is the
// ground-truth owner and only present in simulator output / truth files.
struct ActivityRecord {
    std::string account_id;
    std::string page_id;
    int64_t weight = 1;
    std::string user_id; // empty when unknown
};

enum class ActivityFormat { Csv, Jsonl, Auto };

struct ParseStats {
    int64_t total_lines = 0;
    int64_t rejected_lines = 0;
    std::vector<std::string> reject_samples; // first few, for diagnostics
};

// Parses activity logs. CSV needs a header with at least account_id,page_id
// (weight and user_id optional); JSONL is one object per line with the same
// keys. Duplicate (account,page) rows aggregate by summing weight; malformed
// lines are counted in stats and skipped. A missing required column is a
// ConfigError; conflicting user_id values for one account are a DataError.
std::vector<ActivityRecord> parse_activities(std::istream& in, ActivityFormat format,
                                             ParseStats* stats = nullptr);

std::vector<ActivityRecord> load_activities(const std::string& path,
                                            ActivityFormat format = ActivityFormat::Auto,
                                            ParseStats* stats = nullptr);

void write_activities_csv(const std::string& path, const std::vector<ActivityRecord>& records);

} // namespace sockspot
