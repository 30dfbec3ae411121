#pragma once

#include <cstdint>

namespace hazstereo {

// splitmix64; identical sequences on every platform, unlike the
// distribution adapters in <random>.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Stateless mix of up to three keys, for per-pixel jitter and value noise.
inline uint64_t hash_mix(uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = a * 0x9e3779b97f4a7c15ull ^ b * 0xbf58476d1ce4e5b9ull ^ c * 0x94d049bb133111ebull;
    return splitmix64(s);
}

inline float hash_to_unit_float(uint64_t h) {
    return static_cast<float>(h >> 40) * (1.0f / 16777216.0f); // 24 mantissa bits
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() { return splitmix64(state_); }
    uint32_t next_u32() { return static_cast<uint32_t>(next_u64() >> 32); }

    // uniform in [0, 1)
    float next_float() { return hash_to_unit_float(next_u64()); }
    double next_double() { return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0); }

    float uniform(float lo, float hi) { return lo + (hi - lo) * next_float(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

private:
    uint64_t state_;
};

} // namespace hazstereo
