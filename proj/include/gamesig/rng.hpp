#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace gamesig {

// SplitMix64: counter-based 64-bit generator (Steele, Lea & Flood 2014).
// All randomness in the library flows through this generator so that results
// are reproducible across platforms and thread schedules.
inline constexpr const char* kRngName = "splitmix64";

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return splitmix64_mix(state_);
  }

  // Uniform on [0, 1) with 53 bits of mantissa.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on [-1, 1].
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  // Uniform integer in [0, k). k <= 2^16 in practice; modulo bias negligible.
  std::uint64_t below(std::uint64_t k) { return next() % k; }

  // Standard normal via polar Box-Muller (deterministic, no stdlib
  // distribution dependence).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = uniform_pm1();
      v = uniform_pm1();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * factor;
    has_cached_ = true;
    return u * factor;
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Splittable stream derivation: each (base seed, index path) pair names an
// independent stream, so parallel workers draw from disjoint generators in a
// schedule-independent way.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64_mix(base + 0x9E3779B97F4A7C15ull);
  for (std::uint64_t w : path) {
    s = splitmix64_mix(s ^ (0x9E3779B97F4A7C15ull * (w + 1)));
  }
  return s;
}

}  // namespace gamesig
