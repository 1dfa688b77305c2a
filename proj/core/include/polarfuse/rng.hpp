// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace polarfuse {

// Counter-based RNG: every draw is a pure function of (key, counter), so any
// parallel schedule reproduces the sequential stream bit for bit.

inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
}

inline uint64_t rng_bits(uint64_t key, uint64_t counter) {
    return mix64(counter + mix64(key + 0x632BE59BD9B4E019ull));
}

// Uniform in [0, 1) with 53 random bits.
inline double rng_uniform(uint64_t key, uint64_t counter) {
    return static_cast<double>(rng_bits(key, counter) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes counters (2c, 2c+1).
inline double rng_gaussian(uint64_t key, uint64_t counter) {
    double u1 = rng_uniform(key, 2 * counter);
    double u2 = rng_uniform(key, 2 * counter + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Stateful convenience wrapper around the counter stream.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : key_(hash_combine(seed, stream)) {}

    Rng substream(uint64_t id) const { return Rng(key_, hash_combine(0xABCD1234u, id)); }

    uint64_t bits() { return rng_bits(key_, next_++); }
    double uniform() { return rng_uniform(key_, next_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(bits() % static_cast<uint64_t>(hi - lo + 1));
    }

    uint64_t key() const { return key_; }

private:
    uint64_t key_;
    uint64_t next_ = 0;
};

} // namespace polarfuse
