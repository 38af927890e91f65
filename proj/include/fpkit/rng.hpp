#pragma once

#include <cstdint>

namespace fpkit {

// Deterministic per-item random stream. The state is derived from
// (global_seed, item_index) with a splitmix64-style mix, so a given item
// gets the same stream no matter how work is scheduled across threads.
class SeededRng {
public:
    SeededRng(std::uint64_t global_seed, std::uint64_t item_index)
        : state_(mix(mix(global_seed) ^ mix(item_index + 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform over [lo, hi], inclusive; unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t range = hi - lo + 1; // hi >= lo; full range wraps to 0
        if (range == 0) return next_u64();
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + v % range;
    }

    // Uniform in [0, 1).
    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (one of the pair discarded; stream
    // cost is fixed at two draws per call for reproducibility).
    double normal();

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

SeededRng derive_item_rng(std::uint64_t global_seed, std::uint64_t item_index);

} // namespace fpkit
