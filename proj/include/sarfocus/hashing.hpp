#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace sarfocus {

/// 64-bit mixing function used everywhere a stable hash is needed.
///
/// This is the splitmix64 output function applied to `x + 0x9e3779b97f4a7c15`,
/// so `mix64(0) == 0xe220a8397b1dcdaf`, the first value of the reference
/// splitmix64 generator seeded with 0. Only integer arithmetic is involved,
/// so results are identical on every platform.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl64(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

/// Order-dependent combination: `mix64(rotl(h, 23) ^ mix64(v))`.
constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(rotl64(h, 23) ^ mix64(v));
}

/// Folds a sequence of values into one seed. Used to derive independent
/// counter-based RNG streams, e.g. `derive_seed({master, replicate})`.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x5346'4f43'5553'0001ULL;
  for (auto p : parts) h = hash_combine(h, p);
  return h;
}

/// xoshiro256** seeded through splitmix64. Deliberately self-contained:
/// the standard distributions are implementation-defined, and every scan
/// must be bit-reproducible across toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  std::uint64_t next() noexcept;

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  std::uint64_t s_[4];
};

}  // namespace sarfocus
