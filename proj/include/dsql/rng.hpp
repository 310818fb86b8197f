#pragma once

#include <cstdint>
#include <random>

namespace dsql::rng {

/// SplitMix64 step; used to derive well-mixed child seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic per-cell seed: hash of (base_seed, cell_index).
/// Grid scans seed each cell independently so results do not depend on
/// scheduling or thread count.
inline std::uint64_t cell_seed(std::uint64_t base_seed, std::uint64_t cell_index) {
    std::uint64_t s = base_seed ^ (0xD1B54A32D192ED03ull * (cell_index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

/// Engine for all stochastic sampling in the toolkit.
using Engine = std::mt19937_64;

/// Engine seeded for one grid cell / replication.
inline Engine make_engine(std::uint64_t base_seed, std::uint64_t cell_index) {
    return Engine(cell_seed(base_seed, cell_index));
}

} // namespace dsql::rng
