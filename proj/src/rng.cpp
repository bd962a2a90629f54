#include "sockspot/rng.hpp"

#include <cmath>

namespace sockspot {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t derive_seed(uint64_t base, std::string_view stage, uint64_t salt) {
    return splitmix64(base ^ fnv1a64(stage) ^ splitmix64(salt + 0x51ED5EEDULL));
}

uint64_t Rng::below(uint64_t n) {
    // multiply-shift; bias is < 2^-64 per draw, irrelevant at our scales
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    return static_cast<uint64_t>(m >> 64);
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
}

} // namespace sockspot
