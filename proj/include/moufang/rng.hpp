#pragma once

#include <cstdint>
#include <random>

namespace moufang {

/// Seeded generator used by every sampled check.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Range reduction is done here by rejection so that draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return eng_(); }

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin() { return (eng_() >> 63) != 0; }

  /// Independent child stream, stable for a given (seed, salt).
  Rng split(std::uint64_t salt) const { return Rng(mix(seed_ ^ mix(salt + 0x9e3779b97f4a7c15ULL))); }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace moufang
