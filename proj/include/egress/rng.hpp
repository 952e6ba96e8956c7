#pragma once

#include <cstdint>
#include <random>

namespace egress {

// Bijective 64-bit mixer. Used to derive independent seeds from a base seed;
// distinct inputs always map to distinct outputs.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic RNG stream. Wraps mt19937_64 (whose output sequence is fixed
// by the standard) and avoids std::uniform_*_distribution, whose draw
// sequences differ between standard library implementations. Identical seeds
// give identical draw sequences on every platform.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Unbiased integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

    // Double in [0, 1) with 53 random bits.
    double unit() { return double(gen_() >> 11) * 0x1.0p-53; }

    friend bool operator==(const DetRng& a, const DetRng& b) { return a.gen_ == b.gen_; }

private:
    std::mt19937_64 gen_;
};

} // namespace egress
