#include "pphi/rng.hpp"

#include <cmath>

namespace pphi {

namespace {

// Multiplier and Weyl constant of the philox2x64 round function.
constexpr uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;

inline void philox_round(uint64_t& c0, uint64_t& c1, uint64_t key) {
    unsigned __int128 prod = static_cast<unsigned __int128>(kPhiloxM) * c0;
    uint64_t lo = static_cast<uint64_t>(prod);
    uint64_t hi = static_cast<uint64_t>(prod >> 64);
    c0 = hi ^ key ^ c1;
    c1 = lo;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001B3ULL;

inline void fnv_byte(uint64_t& h, uint8_t b) {
    h ^= b;
    h *= kFnvPrime;
}

inline void fnv_u64(uint64_t& h, uint64_t v) {
    for (int i = 0; i < 8; ++i) fnv_byte(h, static_cast<uint8_t>(v >> (8 * i)));
}

}  // namespace

std::array<uint64_t, 2> philox2x64(uint64_t ctr0, uint64_t ctr1, uint64_t key) {
    uint64_t c0 = ctr0, c1 = ctr1, k = key;
    for (int round = 0; round < 10; ++round) {
        philox_round(c0, c1, k);
        k += kPhiloxW;
    }
    return {c0, c1};
}

uint64_t derive_seed(uint64_t master, const std::vector<SeedLabel>& labels) {
    uint64_t h = kFnvOffset;
    fnv_u64(h, master);
    for (const SeedLabel& l : labels) {
        if (l.kind == SeedLabel::Kind::Str) {
            fnv_byte(h, 's');
            fnv_u64(h, l.str.size());
            for (char c : l.str) fnv_byte(h, static_cast<uint8_t>(c));
        } else {
            fnv_byte(h, 'i');
            fnv_u64(h, l.num);
        }
    }
    return splitmix64(h ^ master);
}

uint64_t derive_seed(uint64_t master, std::initializer_list<SeedLabel> labels) {
    return derive_seed(master, std::vector<SeedLabel>(labels));
}

uint64_t CounterRng::next_u64() {
    if (avail_ == 0) {
        block_ = philox2x64(ctr_++, 0, key_);
        avail_ = 2;
    }
    return block_[2 - avail_--];
}

double CounterRng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u clamped away from 0 so log stays finite.
    double u = next_uniform();
    double v = next_uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u));
    double theta = 2.0 * M_PI * v;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace pphi
