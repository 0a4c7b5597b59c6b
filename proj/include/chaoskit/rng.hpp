#pragma once

// Counter-based random numbers: every variate is a pure function of
// (seed, stream, counter), so sample i can be generated on any thread and
// the stream is bit-identical regardless of scheduling.

#include <cstdint>

namespace ck {

namespace detail {
// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

// uniform 64-bit word for a (seed, stream, counter) triple
inline std::uint64_t random_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t z = detail::mix64(seed);
    z = detail::mix64(z ^ (0x94d049bb133111ebull * stream));
    z = detail::mix64(z ^ (0xbf58476d1ce4e5b9ull * counter));
    return z;
}

// uniform double in the open interval (0, 1)
inline double random_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return (double(random_word(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// quantile of the standard normal distribution (inverse CDF)
double normal_quantile(double u);

// standard normal variate for a (seed, stream, counter) triple
inline double random_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return normal_quantile(random_uniform(seed, stream, counter));
}

}  // namespace ck
