#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>

namespace mdl {

// Counter-based SplitMix64. Output k of stream `seed` is
// finalize(seed + (k+1) * 0x9E3779B97F4A7C15); the finalizer is the standard
// Stafford mix13. Streams are split by hashing a tag into a fresh seed, so
// trials and sub-streams are independent and order-insensitive. Any
// implementation of the same two functions reproduces the streams exactly.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0,n). Rejection-free multiply-shift; the bias is
    /// below 2^-64 per draw, irrelevant at desk scale and fully deterministic.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via the polar (Marsaglia) method.
    double next_normal() {
        for (;;) {
            double u = 2.0 * next_double() - 1.0;
            double v = 2.0 * next_double() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return SplitMix64::mix(seed ^ SplitMix64::mix(tag + 0x9E3779B97F4A7C15ULL));
}

/// Tagged stream split, e.g. derive_seed(seed, "holdout").
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL; // FNV-1a 64
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return derive_seed(seed, h);
}

/// Draw an index from a cumulative weight table (last entry is the total).
inline std::size_t draw_categorical(SplitMix64& rng, std::span<const double> cumulative) {
    double u = rng.next_double() * cumulative.back();
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (u < cumulative[mid]) hi = mid; else lo = mid + 1;
    }
    return lo;
}

} // namespace mdl
