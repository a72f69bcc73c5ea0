#pragma once

#include <cstdint>

namespace lcc {

/// Deterministic, platform-independent PRNG with cheap splitting.
///
/// Every randomized routine in the library draws from a SplitRng seeded by
/// the caller, so a run is reproducible from its recorded seed alone.
/// Parallel workers use split(trial_index) to obtain independent streams
/// whose output does not depend on scheduling.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : base_(seed), ctr_(0) {}

    /// Next 64 random bits (splitmix64 stream).
    std::uint64_t next() {
        std::uint64_t z = base_ + (++ctr_) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound), bound > 0. Rejection sampling, exact.
    std::uint64_t uniform(std::uint64_t bound) {
        // Reject the final partial block so every residue is equally likely.
        std::uint64_t limit = bound * (UINT64_MAX / bound);
        for (;;) {
            std::uint64_t v = next();
            if (v < limit || limit == 0) return v % bound;
        }
    }

    bool coin() { return next() & 1; }

    /// Bernoulli(num/den) with exact integer arithmetic (num <= den <= 2^32).
    bool bernoulli(std::uint64_t num, std::uint64_t den) {
        return uniform(den) < num;
    }

    /// Independent child stream identified by tag; does not advance *this.
    SplitRng split(std::uint64_t tag) const {
        return SplitRng(mix(base_ ^ 0xA02BDBF7BB3C0A7ULL, tag));
    }

    /// Stateless mixing of two words; used to derive per-point streams.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 0x165667B19E3779F9ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_seed() const { return base_; }

private:
    std::uint64_t base_;
    std::uint64_t ctr_;
};

} // namespace lcc
