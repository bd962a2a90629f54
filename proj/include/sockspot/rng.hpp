#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sockspot {

uint64_t splitmix64(uint64_t x);
uint64_t fnv1a64(std::string_view s);

// Stage seeds are derived from the pipeline seed so that a single --seed
// reproduces every stage: seed_stage = splitmix64(base ^ fnv1a64(stage) ^ salt).
uint64_t derive_seed(uint64_t base, std::string_view stage, uint64_t salt = 0);

// mt19937_64 with hand-rolled draw helpers. The standard distributions are
// implementation-defined, so all mappings from raw engine output to values
// live here and stay bit-stable across compilers.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // uniform in [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n), n >= 1 (Lemire multiply-shift)
    uint64_t below(uint64_t n);

    // standard normal via Box-Muller
    double normal();

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sockspot
