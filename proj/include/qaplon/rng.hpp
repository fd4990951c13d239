#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qaplon::rng {

/// SplitMix64 finalizer; used for seed derivation and hashing.
inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Deterministic 64-bit-seeded stream with explicit, stdlib-independent
/// draw semantics so outputs are reproducible across toolchains.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [lo, hi], rejection method.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    if (lo >= hi) return lo;
    const std::uint64_t range =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    const std::uint64_t reject_below = (0 - range) % range;  // 2^64 mod range
    std::uint64_t x;
    do {
      x = gen_();
    } while (x < reject_below);
    return lo + static_cast<std::int64_t>(x % range);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qaplon::rng
