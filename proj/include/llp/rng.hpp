#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace llp {

// All randomness in the library flows through Rng. Experiments derive
// per-cell and per-repetition generators with derive_seed(master, offset),
// where offset is a stable counter (cell index, repetition index, ...), so
// every result is a pure function of (config, master seed) no matter how the
// work is scheduled across threads.
uint64_t splitmix64(uint64_t x);

inline uint64_t derive_seed(uint64_t master, uint64_t offset) {
  return splitmix64(master ^ splitmix64(offset * 0x9E3779B97F4A7C15ULL + 1));
}

// Seedable generator wrapping std::mt19937_64. The distribution logic
// (uniform01, bounded ints, shuffling) is implemented here rather than with
// std::*_distribution so that streams are identical across standard library
// implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n) via rejection sampling.
  size_t uniform_index(size_t n);

  bool bernoulli(double p) { return uniform01() < p; }

  // Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<size_t> permutation(size_t n);

  // Independent generator for a sub-task; derived from the original seed, not
  // from the current engine state, so it does not depend on how much
  // randomness was consumed before the call.
  Rng derive(uint64_t offset) const { return Rng(derive_seed(seed_, offset)); }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace llp
