#pragma once

#include <cstdint>
#include <limits>

namespace ranktraffic {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Splitmix64 stream. Satisfies UniformRandomBitGenerator so it can drive
// the <random> distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<std::uint64_t>::max();
    }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform double in [0, 1)
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // uniform integer in [1, bound]; modulo bias is negligible for bound << 2^64
    std::uint64_t uniform_index(std::uint64_t bound) { return (*this)() % bound + 1; }

private:
    std::uint64_t state_;
};

// Per-query stream: all randomness of query q derives from (master_seed, q)
// only, so results do not depend on how queries are distributed over workers.
// The double mix places stream starting points at pseudo-random offsets of
// the splitmix orbit.
inline SplitMix64 query_stream(std::uint64_t master_seed, std::uint64_t query_index) {
    return SplitMix64(mix64(master_seed ^ mix64(query_index + 0x51ed270b1a9045c5ULL)));
}

}  // namespace ranktraffic
