#pragma once

#include <cstdint>
#include <random>

namespace xqr {

// All stochastic operations draw from this engine. Streams are split by
// hashing (seed, stream) so that e.g. bootstrap batch b never shares a
// sequence with batch b+1.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x5851F42D4C957F2DULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(derive_seed(seed, stream));
}

// Uniform on [0, 1) from the top 53 bits; identical across standard libraries.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace xqr
