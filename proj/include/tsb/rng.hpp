#pragma once

#include <cstdint>

namespace tsb {

// Counter-based generator: the value at (seed, counter) is a pure function of
// both, so trial i of a run always sees the same draws no matter how trials
// are partitioned across workers.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // splitmix64 finalizer applied to seed ^ golden-ratio-stride counter
    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // independent substream: mixes a stream id into the seed
    CounterRng substream(std::uint64_t stream) const {
        CounterRng r(0);
        r.seed_ = bits(~stream);
        return r;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

} // namespace tsb
