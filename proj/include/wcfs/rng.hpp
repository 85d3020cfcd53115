#pragma once

#include <cmath>
#include <cstdint>

namespace wcfs {

// SplitMix64 finalizer: bijective avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based pseudo-random stream: output i is mix64(key + i*gamma), so a
// stream is a pure function of (key, counter) and never needs jump-ahead.
// Substreams are derived by hashing labels into the key, which keeps every
// (replication, purpose) pair on an independent stream with no coordination.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : state_(key) {}

    // Independent substream for a named purpose.
    RngStream derived(std::uint64_t label) const {
        return RngStream(mix64(state_ + mix64(label + 0x632BE59BD9B4E019ull)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform on (0, 1), both endpoints excluded so log() stays finite.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Exponential with the given rate (mean 1/rate).
    double next_exponential(double rate) {
        return -std::log(next_double()) / rate;
    }

    // Uniform integer in [0, n). Modulo bias is < 2^-50 for any n that fits
    // in 13 bits or so; fine for test-case generation, not for cryptography.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

private:
    std::uint64_t state_;
};

// Deterministic per-run seed for a sweep cell, independent across the grid.
inline std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t model_index,
                              std::uint64_t rho_index, std::uint64_t replication) {
    std::uint64_t h = mix64(base_seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h + mix64(model_index + 1));
    h = mix64(h + mix64(rho_index + 1));
    h = mix64(h + mix64(replication + 1));
    return h;
}

}  // namespace wcfs
