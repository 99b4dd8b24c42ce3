#pragma once

#include <cmath>
#include <cstdint>

namespace qaga::rng {

// SplitMix64 step (Steele, Lea, Flood 2014). Fully portable: output depends
// only on the 64-bit state, never on platform or standard-library details.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream-splitting rule: a child stream's seed is one SplitMix64 step of
// (parent_seed XOR golden-ratio-scrambled id). Every independent decision
// (an edge inclusion, a coefficient draw, a per-read chain) gets its own
// child so instances are reproducible across platforms and languages.
inline std::uint64_t derive(std::uint64_t parent, std::uint64_t id) {
  std::uint64_t s = parent ^ (0x9e3779b97f4a7c15ULL * (id + 1));
  return splitmix64(s);
}

inline std::uint64_t derive(std::uint64_t parent, std::uint64_t a,
                            std::uint64_t b) {
  return derive(derive(parent, a), b);
}

inline std::uint64_t derive(std::uint64_t parent, std::uint64_t a,
                            std::uint64_t b, std::uint64_t c) {
  return derive(derive(parent, a, b), c);
}

/// Seedable counter-based generator over SplitMix64.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, n) without modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  int next_spin() { return (next_u64() & 1u) ? +1 : -1; }

  /// Standard normal via Box-Muller (cosine branch, second value discarded).
  double next_normal() {
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace qaga::rng
