#pragma once

// Counter-based random substreams for reproducible Monte Carlo.
//
// Generator family: xoshiro256** (Blackman and Vigna). A substream for
// (master_seed, run_index) is derived without stream jumping:
//
//     key   = mix64(master_seed ^ (run_index * 0x9E3779B97F4A7C15))
//     state = four successive SplitMix64 outputs seeded with `key`
//
// where mix64 is the SplitMix64 finalizer. The multiplier is odd, so distinct
// run indices give distinct keys for any seed, and mix64 is a bijection.
//
// Uniforms are taken from the top 52 bits, centred in their cell, so they lie
// strictly inside (0,1) (a centred 53-bit value can round up to 1.0). Normals use the inverse-CDF transform with
// Wichura's AS241 (PPND16), accurate to about 1e-16 relative.

#include <array>
#include <cstdint>

namespace tranchelab {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
}

/// Inverse standard normal CDF, u in (0,1). Returns +-inf at 0 and 1.
double inverse_normal_cdf(double u);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t key) noexcept {
        std::uint64_t sm = key;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return next(); }

    result_type next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1).
    double uniform() noexcept {
        return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
    }

    double normal(double mean, double sd) { return mean + sd * inverse_normal_cdf(uniform()); }

    const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

constexpr std::uint64_t substream_key(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
    return mix64(master_seed ^ (run_index * 0x9E3779B97F4A7C15ULL));
}

inline RandomStream substream(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
    return RandomStream(substream_key(master_seed, run_index));
}

}  // namespace tranchelab
