#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace bridgecut {

// Deterministic substream RNG. A stream is identified by (root_seed,
// stream_id); the pair is hashed through splitmix64 into the seed material
// of a mt19937_64, so distinct stream ids give statistically unrelated
// engines while the same pair always reproduces the same draw sequence,
// regardless of which thread runs the replicate.
class RngStream {
public:
    RngStream(std::uint64_t root_seed, std::uint64_t stream_id)
        : root_seed_(root_seed), stream_id_(stream_id) {
        std::uint64_t x = root_seed ^ 0x6A09E667F3BCC909ull;
        x += 0x9E3779B97F4A7C15ull * (stream_id + 1);
        std::seed_seq seq{splitmix64(x), splitmix64(x), splitmix64(x),
                          splitmix64(x)};
        engine_.seed(seq);
    }

    std::uint64_t root_seed() const { return root_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t u64() { return engine_(); }

    // Uniform on the open interval (0,1): (k + 1/2) / 2^53 with k on 53 bits.
    // Never returns an endpoint, so log() and 1/x downstream are safe.
    double uniform01() {
        return (static_cast<double>(u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Unbiased integer in [0, n) by Lemire's multiply-shift rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        using u128 = unsigned __int128;
        std::uint64_t x = u64();
        u128 m = static_cast<u128>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (-n) % n;
            while (lo < t) {
                x = u64();
                m = static_cast<u128>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Standard normal via the Marsaglia polar method; the spare deviate is
    // cached, so draws come in deterministic call order per stream.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double exponential(double rate = 1.0) {
        return -std::log(uniform01()) / rate;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t root_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bridgecut
