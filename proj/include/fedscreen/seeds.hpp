#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fedscreen::seeds {

// splitmix64 finalizer; bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Sub-seed roles derived from one master seed. The mapping is part of the
// reproducibility contract: master seed + role index fully determine every
// random stream in an experiment.
enum class Role : std::uint64_t {
    Generator = 1,  // synthetic data generation
    Split = 2,      // train/test shuffle
    Partition = 3,  // client shard shuffle
    Init = 4,       // parameter initialization
    Selection = 5,  // per-round participant sampling
    Training = 6,   // base seed for per-client training
};

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t derive(std::uint64_t master, Role role) {
    return mix64(master + kGamma * static_cast<std::uint64_t>(role));
}

// Seed for one client's local training in one round. Depends only on
// (base, round, client), so schedules are reproducible regardless of the
// execution order of clients.
inline std::uint64_t client_training_seed(std::uint64_t base, int round, int client_id) {
    std::uint64_t r = mix64(base + kGamma * (static_cast<std::uint64_t>(round) + 1));
    return mix64(r + kGamma * (static_cast<std::uint64_t>(client_id) + 1));
}

// Unbiased draw in [0, n) from a mt19937_64 stream.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t r = rng();
    while (r >= limit) r = rng();
    return r % n;
}

// Uniform real in [0, 1) with 53 random bits.
inline double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates; identical results on every platform, unlike std::shuffle.
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[bounded(rng, i)]);
    }
}

}  // namespace fedscreen::seeds
