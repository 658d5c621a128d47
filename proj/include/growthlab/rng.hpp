#pragma once

#include <cstdint>

namespace growthlab {

// SplitMix64. Deterministic across platforms so that seeded suites produce
// byte-identical reports everywhere.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling keeps the distribution exact and deterministic.
    std::uint64_t limit = ~0ull - (~0ull % bound);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  bool coin() { return (next() & 1u) != 0; }

private:
  std::uint64_t state_;
};

}  // namespace growthlab
