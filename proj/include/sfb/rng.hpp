#pragma once

#include <cstdint>

namespace sfb {

// splitmix64; bit-for-bit reproducible across platforms, unlike the
// distributions in <random>.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // decorrelated stream for worker i of a multistart run
    static SplitMix64 substream(std::uint64_t master_seed, std::uint64_t i) {
        SplitMix64 seeder(master_seed);
        seeder.state_ += 0x9e3779b97f4a7c15ull * (i + 1);
        seeder.next();
        return seeder;
    }

private:
    std::uint64_t state_;
};

} // namespace sfb
