#pragma once

#include <cstdint>
#include <random>

namespace solarfc {

/// Stable seed mixing for deriving independent streams from one base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Bounded draw with explicit rejection sampling; portable across stdlibs.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    const double u = (rng() >> 11) * 0x1.0p-53;  // [0,1)
    return lo + u * (hi - lo);
}

/// Fisher-Yates with the portable bounded draw above.
template <typename Vec>
void shuffle_indices(Vec& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace solarfc
