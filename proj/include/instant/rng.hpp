#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace instant {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a, used to turn sub-stream names into stream ids.
inline constexpr std::uint64_t stream_id(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seedable, splittable generator. A stream is identified by the root seed
/// and the path of split() calls that produced it, so independent trials
/// can draw from private streams and still reproduce bit-for-bit.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : Rng(seed, splitmix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::uint64_t stream) const {
    return Rng(seed_, splitmix64(key_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
  }
  Rng split(std::string_view name) const { return split(stream_id(name)); }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    // reject the low 2^64 mod n values so every residue is equally likely
    const std::uint64_t limit = -n % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % n;
    }
  }

  bool coin() { return (engine_() >> 63) != 0; }

private:
  Rng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key), engine_(key) {}

  std::uint64_t seed_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

} // namespace instant
