#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gsb {

// All randomness in a run flows from engines created here. Bounded draws and
// uniform reals are hand-rolled so that a seed produces the same stream on
// every standard library; std::mt19937_64 output itself is specified by the
// standard, the distributions are not.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// stream_id separates independent consumers of the same run seed
// (0: stream generator, 1: eviction policy, ...).
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id = 0) {
  std::uint64_t s = seed + 0x51ed270b7a2ff5c1ull * stream_id;
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return std::mt19937_64(a ^ (b << 1));
}

// Unbiased draw in [0, n). n must be > 0.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[bounded(rng, i)]);
  }
}

}  // namespace gsb
