#pragma once

#include <cstddef>
#include <vector>

#include "llp/types.hpp"

namespace llp {

// Fixed-size bags over a flat feature buffer. Every bag holds exactly k
// examples; total examples = bag_count() * k.
class BaggedSample {
 public:
  BaggedSample(size_t k, size_t dim, Mode mode);

  size_t k() const { return k_; }
  size_t dim() const { return dim_; }
  Mode mode() const { return mode_; }
  size_t bag_count() const { return alphas_.size(); }
  size_t example_count() const { return alphas_.size() * k_; }

  double alpha(size_t j) const { return alphas_[j]; }
  BagView bag(size_t j) const {
    return {k_, dim_, features_.data() + j * k_ * dim_, alphas_[j]};
  }
  std::span<const double> feature(size_t j, size_t i) const {
    return {features_.data() + (j * k_ + i) * dim_, dim_};
  }

  // features must hold exactly k * dim values. Validates the classification
  // invariant alpha * k = integer count within tolerance.
  void append_bag(std::span<const double> features, double alpha);

  // Sub-sample made of bags [first, first + count).
  BaggedSample slice(size_t first, size_t count) const;

 private:
  size_t k_;
  size_t dim_;
  Mode mode_;
  std::vector<double> features_;
  std::vector<double> alphas_;
};

// Shuffles the dataset by seed, splits it into floor(n/k) consecutive bags
// and drops the leftover examples. Each bag's alpha is the mean of its
// labels. The multiset of bagged examples equals the multiset of the first
// floor(n/k)*k shuffled examples.
BaggedSample partition_into_bags(const Dataset& data, size_t k, uint64_t seed);

// Groups bag indices (in current sample order) into batches holding
// floor(examples_per_batch / k) bags each; the last short batch is kept.
// Callers wanting per-epoch permutation shuffle their own index order first.
std::vector<std::vector<size_t>> batch_bags(const BaggedSample& sample, size_t examples_per_batch);

}  // namespace llp
