// rng.hpp — counter-based deterministic random streams
//
// Sweep output must be byte-identical regardless of worker count or platform,
// so sampling uses an explicit splitmix64 stream keyed by (seed, counter)
// rather than std:: distributions (whose output is implementation-defined).

#pragma once

#include <cstdint>

namespace qmemc {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {
        // decorrelate nearby seeds
        splitmix64_next(state_);
        splitmix64_next(state_);
    }

    // substream for an indexed sample; independent of draw order elsewhere
    static RandomStream keyed(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64_next(s);
        s = a ^ (counter * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL);
        return RandomStream(s);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // uniform in [0, 1), 53-bit resolution
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, hi)
    double next_double(double hi) { return next_double() * hi; }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) {
        // modulo bias is < 2^-40 for n < 2^24; acceptable for sampling states
        return next_u64() % n;
    }

private:
    std::uint64_t state_;
};

} // namespace qmemc
