#pragma once

#include <cstdint>
#include <random>

namespace fdb {

// 64-bit finalizer of the splitmix64 generator. Used both to whiten raw
// user seeds and as the documented seed-splitting rule for ensembles.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed-splitting rule: the stream for path `index` of a run with `master`
// seed is splitmix64(master XOR index). Single-path runs use index 0.
inline std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ index);
}

// All samplers draw from this engine type seeded with an already-mixed value.
using RngEngine = std::mt19937_64;

inline RngEngine make_engine(std::uint64_t seed) { return RngEngine(splitmix64(seed)); }

}  // namespace fdb
