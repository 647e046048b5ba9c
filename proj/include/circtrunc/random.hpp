#ifndef CIRCTRUNC_RANDOM_HPP
#define CIRCTRUNC_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace circtrunc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed for an independent substream keyed by (seed, keys...).
/// The same key tuple always yields the same stream regardless of the order
/// in which substreams are requested.
constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                       std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : keys) {
    h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  }
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  return Rng(substream_seed(seed, keys));
}

/// Uniform on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng);
  while (x <= 0.0) {
    x = u(rng);
  }
  return x;
}

}  // namespace circtrunc

#endif  // CIRCTRUNC_RANDOM_HPP
