#pragma once
// Seeding and random streams.
//
// All randomness in this library flows through SplitMix64 streams whose seeds
// are derived by hashing a base seed together with integer labels (design
// column index, trial index, and so on). Work units therefore draw from
// independent streams and results never depend on execution order, which is
// what makes multi-threaded sweeps reproduce the single-threaded output
// byte for byte.

#include <cassert>
#include <cstdint>
#include <initializer_list>

namespace gt {

// SplitMix64 output function (Steele, Lea and Flood): a bijective avalanche
// mix of a 64-bit word. Also used standalone as the seed-derivation hash.
constexpr uint64_t avalanche64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable sub-seed for the stream identified by (seed, labels...).
inline uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> labels) {
  uint64_t s = avalanche64(seed + 0x9e3779b97f4a7c15ULL);
  for (uint64_t v : labels) {
    s = avalanche64(s ^ avalanche64(v + 0x9e3779b97f4a7c15ULL));
  }
  return s;
}

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() { return avalanche64(state_ += 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), exactly unbiased via rejection of the low residue.
  uint64_t uniform_below(uint64_t n) {
    assert(n > 0);
    const uint64_t reject_below = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const uint64_t r = next();
      if (r >= reject_below) return r % n;
    }
  }

 private:
  uint64_t state_;
};

}  // namespace gt
