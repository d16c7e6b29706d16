#ifndef DDSC_RNG_HPP_
#define DDSC_RNG_HPP_

#include <cstdint>

namespace ddsc
{

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Counter-based uniform draw in [0, 1). The value depends only on
 * (seed, stream, counter), so Monte Carlo results do not depend on how samples
 * are scheduled across threads.
 */
constexpr double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
{
    const std::uint64_t z = mix64(mix64(seed ^ mix64(stream)) + counter);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

} // namespace ddsc

#endif
