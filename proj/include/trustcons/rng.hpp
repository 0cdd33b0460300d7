#ifndef TRUSTCONS_RNG_HPP
#define TRUSTCONS_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace trustcons {

/// Random engine used for every stream in the simulator.
using Rng = std::mt19937_64;

/// Derives a child seed from `base` and a path of integer labels
/// (trial index, edge endpoints, ...). Distinct paths give statistically
/// independent streams; the mapping is stable across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

// Tags for non-edge substreams, kept clear of agent indices.
inline constexpr std::uint64_t kAttackStreamTag = 0xA77AC4ULL << 32;

}  // namespace trustcons

#endif  // TRUSTCONS_RNG_HPP
