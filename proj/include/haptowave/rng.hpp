#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace haptowave {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97f4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for replicate r derived from the base seed; replicates get
/// independent streams regardless of execution order.
inline uint64_t replicate_seed(uint64_t base, int replicate) {
    return splitmix64(base ^ splitmix64(static_cast<uint64_t>(replicate) + 1));
}

/// Deterministic RNG for one replicate. mt19937_64 is fully specified by the
/// standard, so (seed -> sequence) is identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Uniform in [0,1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Exact Binomial(n, p) by CDF inversion; one uniform in the common case.
    /// Large n*p is handled by exact recursive splitting, p > 1/2 by symmetry.
    int64_t binomial(int64_t n, double p) {
        if (n <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (p > 0.5) return n - binomial(n, 1.0 - p);
        const double np = static_cast<double>(n) * p;
        if (np > 30.0) {
            const int64_t half = n / 2;
            return binomial(half, p) + binomial(n - half, p);
        }
        const double u = uniform();
        // q >= 1 - n*p, so u below that bound means zero successes
        // without evaluating the pow.
        if (u < 1.0 - np) return 0;
        return binomial_invert(n, p, u);
    }

    /// Same inversion but the zero-success shortcut is precomputed by the
    /// caller (per-column cache of (1-p)^n).
    int64_t binomial_cached_q0(int64_t n, double p, double q0) {
        if (n <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (static_cast<double>(n) * p > 30.0) return binomial(n, p);
        const double u = uniform();
        if (u < q0) return 0;
        return invert_from(n, p, u, q0);
    }

    static double q0_of(int64_t n, double p) {
        if (n <= 0 || p <= 0.0) return 1.0;
        if (p >= 1.0) return 0.0;
        return std::exp(static_cast<double>(n) * std::log1p(-p));
    }

private:
    int64_t binomial_invert(int64_t n, double p, double u) {
        const double q0 = Rng::q0_of(n, p);
        if (u < q0) return 0;
        return invert_from(n, p, u, q0);
    }

    int64_t invert_from(int64_t n, double p, double u, double q0) {
        const double odds = p / (1.0 - p);
        double pk = q0;
        double cdf = q0;
        int64_t k = 0;
        while (u >= cdf && k < n) {
            pk *= static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
            cdf += pk;
            ++k;
            if (pk <= 0.0) break;  // FP underflow guard; tail mass is ~0
        }
        return k;
    }

    std::mt19937_64 eng_;
};

}  // namespace haptowave
