#pragma once

#include <functional>
#include <span>

#include "llp/losses.hpp"
#include "llp/types.hpp"

namespace llp {

inline constexpr double kEnumerationGuard = 1e6;

// Exact expectation of a bag-level functional over the bag law induced by
// dist and bag size k: sums value(bag) over all s^k feature tuples and 2^k
// label vectors, weighted by their joint probability. Label weights use exact
// products of eta / (1 - eta); nothing is sampled. Guarded so the term count
// s^k 2^k stays <= 1e6 (EnumerationTooLarge otherwise).
//
// threads > 1 splits the feature-tuple space into fixed-size chunks whose
// partial sums are reduced in chunk order, so the result is bit-identical for
// any thread count.
using BagFunctional = std::function<double(const BagView&)>;

struct EnumeratedMoments {
  double mean = 0.0;
  double second_moment = 0.0;
};

EnumeratedMoments enumerate_bag_moments(const FiniteDistribution& dist, size_t k,
                                        const BagFunctional& value, size_t threads = 1);

double enumerate_bag_expectation(const FiniteDistribution& dist, size_t k, const Hypothesis& h,
                                 const LossKind& kind, const MarginalInfo& info,
                                 size_t threads = 1);

double enumerate_bag_variance(const FiniteDistribution& dist, size_t k, const Hypothesis& h,
                              const LossKind& kind, const MarginalInfo& info, size_t threads = 1);

// Numerically stable single-pass mean/variance (incremental mean + M2
// recurrence); variance uses the n-1 denominator and requires count >= 2.
class StreamingMoments {
 public:
  void add(double x) {
    count_ += 1;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  size_t count() const { return count_; }
  double mean() const;
  double variance() const;

 private:
  size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct VarianceSummary {
  double mean = 0.0;
  double variance = 0.0;
  size_t count = 0;
};

VarianceSummary streaming_variance(std::span<const double> values);

}  // namespace llp
