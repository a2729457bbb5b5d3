#pragma once

#include <cstdint>

namespace decoq {

/// Counter-based stream: output i of stream (seed, path) is a pure function of
/// (seed, path, i), so ensembles are bit-identical under any thread schedule.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t path_id)
        : key_(mix(mix(master_seed) ^ mix(path_id ^ 0x9e3779b97f4a7c15ull))) {}

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    /// Uniform on {0, ..., n-1} without modulo bias (rejection sampling).
    std::uint32_t uniform_index(std::uint32_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t u;
        do {
            u = next_u64();
        } while (u >= limit);
        return static_cast<std::uint32_t>(u % n);
    }

    /// Uniform on [0, 1) with 53 bits.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace decoq
