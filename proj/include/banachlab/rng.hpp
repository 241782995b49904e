#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace banachlab {

// splitmix64 step; used to spread seeds into independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic per-stream seed derivation. Trials, restarts and scan cells
// each get their own stream so results do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0xd1342543de82ef95ull * (stream + 1));
    return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

inline std::complex<double> gaussian_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    double re = g(rng);
    double im = g(rng);
    return {re, im};
}

}  // namespace banachlab
