#pragma once

#include <cstdint>

namespace infgen {

// Deterministic seeded generator (splitmix64). std::uniform_int_distribution
// is implementation-defined, so all seeded behaviour in the library goes
// through this to keep outputs byte-identical across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound > 0; rejection-free modulo is fine here,
    // bounds are tiny compared to 2^64
    uint64_t below(uint64_t bound) { return next() % bound; }

    bool bit() { return (next() >> 63) != 0; }

private:
    uint64_t state_;
};

} // namespace infgen
