#pragma once

#include <cstdint>
#include <vector>

#include "sockspot/activity.hpp"

namespace sockspot {

// Synthetic activity-log generator: every user owns one account and a small
// personal pool of pages drawn from a Zipf-popular universe, then comments
// within the pool. A configurable subset of "heavy" users carries enough
// activity to survive an election-style split into many accounts.
struct SynthConfig {
    int users = 500;
    int heavy_users = 12;
    double heavy_activities = 1050.0; // mean activities per heavy user
    double light_activities = 30.0;   // mean activities per light user
    int pages = 200;
    int pool_min = 4;
    int pool_max = 12;
    double zipf = 0.8; // page popularity skew
    uint64_t seed = 7;
};

std::vector<ActivityRecord> synth_activities(const SynthConfig& cfg);

} // namespace sockspot
