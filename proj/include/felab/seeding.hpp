#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace felab {

// SplitMix64 finalizer; the mixing step behind all seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Seed derivation scheme used everywhere:
//
//   derive_seed(master, stream, counter)
//     = mix64( mix64(master + G*(stream+1)) + G*(counter+1) )
//
// with G = 0x9E3779B97F4A7C15 (the 64-bit golden ratio). Every disorder
// realization, state sampler and sub-sampler gets its seed from this map,
// so results depend only on (master seed, stream id, counter) and never on
// thread scheduling or evaluation order.
inline constexpr std::uint64_t kSeedGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t counter) {
    return mix64(mix64(master + kSeedGolden * (stream + 1)) +
                 kSeedGolden * (counter + 1));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// (k + 1/2) * 2^-53 from the top 53 bits: strictly inside (0,1), exactly
// one engine call.
inline double uniform_unit(Rng& rng) {
    return (double(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller cosine branch, exactly two engine calls per draw. Stateless by
// construction so that independent re-implementations can replay a stream.
inline double standard_normal(Rng& rng) {
    const double u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace felab
