#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace multimin {

// splitmix64 step: advances the state and returns the next output word.
// Used for seed expansion and for deriving independent sub-stream seeds.
std::uint64_t splitmix64_next(std::uint64_t& state);

// FNV-1a 64-bit hash; stable across platforms, used for cell identifiers.
std::uint64_t fnv1a64(std::string_view s);

// Deterministic pseudo-random stream: xoshiro256++ seeded via splitmix64.
// The generator algorithm is fixed by this implementation, so identical
// seeds give identical sequences on every platform. std:: distributions are
// deliberately avoided (their outputs are implementation-defined).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    // Next raw 64-bit word.
    std::uint64_t next_u64();

    // Uniform double in [0,1) with 53 random mantissa bits.
    double uniform01();

    // Uniform double in [a,b).
    double uniform(double a, double b);

    // Uniform integer in [0,n), n ≥ 1, without modulo bias (Lemire).
    std::uint64_t uniform_int(std::uint64_t n);

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Independent sub-stream keyed by (this stream's seed, key1, key2).
    RandomStream derive(std::uint64_t key1, std::uint64_t key2) const;

private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
};

// Seed for the sub-stream of one (cell, replication) task: a splitmix64
// chain over (base_seed, cell_hash, replication). Stable contract relied on
// by the grid runner's reproducibility guarantee.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t cell_hash,
                          std::uint64_t replication);

}  // namespace multimin
