#pragma once

#include <span>
#include <vector>

#include "llp/bagging.hpp"
#include "llp/types.hpp"

namespace llp {

// E[y] = sum_x mass(x) * eta(x).
double exact_label_marginal(const FiniteDistribution& dist);

// E[h(x)] = sum_x mass(x) * h(x).
double exact_prediction_mean(const FiniteDistribution& dist, const Hypothesis& h);

// MarginalInfo with exact p and exact E[h(x)] for every given hypothesis.
MarginalInfo exact_marginal_info(const FiniteDistribution& dist,
                                 std::span<const Hypothesis> hypotheses);

// Mean of all bag alphas; with equal-size bags this is the global label mean.
double estimate_p_from_bags(const BaggedSample& sample);

// Mean of h over all features of every bag in the batch except the target
// bag. The whole target bag is excluded so the estimate stays uncorrelated
// with the target's own loss terms. A single-bag batch is an error
// (SingleBagBatch); callers must fall back to exact or split-sample info.
double loo_prediction_mean(std::span<const BagView> batch, size_t target, const Hypothesis& h);
double loo_prediction_mean(const BaggedSample& sample, std::span<const size_t> batch_indices,
                           size_t target_position, const Hypothesis& h);

struct SplitSampleResult {
  MarginalInfo info;      // p and E[h(x)] estimated on the last m2 bags
  BaggedSample training;  // the first m1 = m - m2 bags
};

// Splits off the last m2 bags for estimation: p_hat is their mean alpha and
// E_hat[h(x)] the mean prediction over their m2*k features, per hypothesis.
// Requires 1 <= m2 < bag count.
SplitSampleResult split_sample_estimates(const BaggedSample& sample, size_t m2,
                                         std::span<const Hypothesis> hypotheses);

// Default estimation share: ceil(m / 2) bags.
inline size_t default_split_m2(size_t m) { return (m + 1) / 2; }

}  // namespace llp
