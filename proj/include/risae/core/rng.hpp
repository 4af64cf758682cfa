#pragma once

// Seeded, stream-splittable random source. Every consumer of randomness
// (channel draws, noise, data, shuffles, init) gets its own named stream
// derived from the master seed, so any piece of a run can be reproduced in
// isolation and results do not depend on evaluation order. The generator is
// self-contained (xoshiro256++ with a splitmix64 seeder and an explicit
// Box-Muller transform) so sequences are identical across standard libraries
// and platforms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

namespace risae {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace detail

class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed) { reseed(); }

    /// Independent child stream identified by (label, index). Derivation uses
    /// only the stream key, never the draw position, so children are stable
    /// regardless of how much the parent has been consumed.
    Rng stream(std::string_view label, std::uint64_t index = 0) const {
        std::uint64_t x = key_ ^ detail::fnv1a64(label);
        std::uint64_t k = detail::splitmix64(x);
        x = k ^ (index * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
        return Rng(detail::splitmix64(x));
    }

    /// Two-index variant; labels used with two indices are not reused with one.
    Rng stream(std::string_view label, std::uint64_t i, std::uint64_t j) const {
        return stream(label, i * 0x9E3779B97F4A7C15ULL + j);
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound) by rejection (unbiased).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Standard normal via Box-Muller; the paired deviate is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        // u1 in (0,1] so log() is finite.
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex Gaussian with the given variance per real
    /// dimension (total complex variance = 2 * var_per_dim).
    std::complex<double> cnormal(double var_per_dim) {
        double s = std::sqrt(var_per_dim);
        return {s * normal(), s * normal()};
    }

    /// In-place Fisher-Yates shuffle (implementation-independent order).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    void reseed() {
        std::uint64_t x = key_;
        for (auto& w : s_) w = detail::splitmix64(x);
        has_cached_ = false;
        cached_ = 0.0;
    }

    std::uint64_t key_ = 0;
    std::uint64_t s_[4] = {};
    bool has_cached_ = false;
    double cached_ = 0.0;
};

} // namespace risae
