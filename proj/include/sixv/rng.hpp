#pragma once

#include <cstdint>
#include <random>

namespace sixv {

// SplitMix64 finalizer; used as the documented chain-splitting hash.
std::uint64_t splitmix64(std::uint64_t x);

// Seeded random stream with the draw primitives every sampler in this
// project consumes. All mappings from raw 64-bit words are hand-rolled so
// streams are reproducible across standard-library implementations
// (std::mt19937_64 itself is specified bit-exactly; the distributions in
// <random> are not).
//
// A stream must be owned by exactly one consumer at a time.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Documented splitting rule: chain c of master seed s is seeded with
  // splitmix64(s ^ splitmix64(c + 1)). Chains are independent and can be
  // created in any order.
  static RandomStream for_chain(std::uint64_t seed, std::uint64_t chain) {
    return RandomStream(seed ^ splitmix64(chain + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1) with 53 random bits.
  double unit_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Fair +1/-1.
  int fair_sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Exact Bernoulli(1/3). 2^64 = 3q+1, so rejecting the single top word
  // leaves the residues mod 3 exactly equally likely.
  bool bernoulli_third() {
    for (;;) {
      std::uint64_t u = next_u64();
      if (u != ~std::uint64_t{0}) return u % 3 == 0;
    }
  }

  // Exactly uniform on {0,...,n-1} (Lemire multiply-shift with rejection;
  // a redraw happens with probability < n/2^64).
  std::uint64_t uniform_index(std::uint64_t n);

  // One-draw Bernoulli(p) at 53-bit resolution; the float fast path.
  bool bernoulli(double p) { return unit_double() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sixv
