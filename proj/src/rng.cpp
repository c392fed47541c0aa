#include "llp/rng.hpp"

namespace llp {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

size_t Rng::uniform_index(size_t n) {
  if (n <= 1) return 0;
  const uint64_t range = static_cast<uint64_t>(n);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  uint64_t draw = next_u64();
  while (draw >= limit) draw = next_u64();
  return static_cast<size_t>(draw % range);
}

std::vector<size_t> Rng::permutation(size_t n) {
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  for (size_t i = n; i > 1; --i) {
    const size_t j = uniform_index(i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace llp
