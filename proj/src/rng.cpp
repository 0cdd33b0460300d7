#include "trustcons/rng.hpp"

namespace trustcons {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix(base);
  for (std::uint64_t label : path) {
    h = mix(h ^ mix(label + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

}  // namespace trustcons
