#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rdmac {

// splitmix64 step; used to whiten and combine seed material.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Collapse (master seed, stream id, counter) into one well-mixed 64-bit seed.
// Every Monte Carlo trial owns a stream keyed this way, so results do not
// depend on scheduling or worker count.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = a;
    std::uint64_t out = splitmix64(s);
    s ^= b + 0x9e3779b97f4a7c15ULL;
    out ^= splitmix64(s);
    s ^= c + 0xbf58476d1ce4e5b9ULL;
    out ^= splitmix64(s);
    return out;
}

// Deterministic random stream: mt19937_64 seeded through splitmix64 plus a
// self-contained polar-method Gaussian, so draws are identical across
// platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        eng_.seed(splitmix64(s));
    }

    std::uint64_t next_u64() { return eng_(); }

    double uniform01() {
        // 53-bit mantissa in [0,1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    int bit() { return static_cast<int>(next_u64() >> 63); }

    // Unbiased draw from [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Marsaglia polar method.
    double gaussian() {
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
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rdmac
