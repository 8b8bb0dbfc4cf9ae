#pragma once

#include <cstdint>
#include <random>

namespace mailgen {

// Seeded generator with a platform-independent uniform choice.
// std::uniform_int_distribution is implementation-defined, so picks are
// drawn from the raw mt19937_64 stream by rejection sampling instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform index in [0, n). n must be > 0.
  std::size_t pick(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-item seed for batch runs: base XOR hash(index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return base ^ splitmix64(index);
}

}  // namespace mailgen
