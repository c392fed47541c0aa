#include "llp/marginals.hpp"

namespace llp {

double exact_label_marginal(const FiniteDistribution& dist) {
  double p = 0.0;
  for (const auto& a : dist.atoms()) p += a.mass * a.eta;
  return p;
}

double exact_prediction_mean(const FiniteDistribution& dist, const Hypothesis& h) {
  double mean = 0.0;
  for (const auto& a : dist.atoms()) mean += a.mass * h(a.feature);
  return mean;
}

MarginalInfo exact_marginal_info(const FiniteDistribution& dist,
                                 std::span<const Hypothesis> hypotheses) {
  MarginalInfo info(exact_label_marginal(dist), Provenance::Exact);
  for (const Hypothesis& h : hypotheses) {
    info.set_mean_prediction(h.id(), exact_prediction_mean(dist, h));
  }
  return info;
}

double estimate_p_from_bags(const BaggedSample& sample) {
  require(sample.bag_count() >= 1, Errc::EmptySample, "no bags");
  double sum = 0.0;
  for (size_t j = 0; j < sample.bag_count(); ++j) sum += sample.alpha(j);
  return sum / static_cast<double>(sample.bag_count());
}

double loo_prediction_mean(std::span<const BagView> batch, size_t target, const Hypothesis& h) {
  require(batch.size() >= 2, Errc::SingleBagBatch,
          "leave-one-bag-out needs at least two bags in the batch");
  require(target < batch.size(), Errc::InvalidArgument, "target index out of range");
  double sum = 0.0;
  size_t count = 0;
  for (size_t b = 0; b < batch.size(); ++b) {
    if (b == target) continue;
    for (size_t i = 0; i < batch[b].k; ++i) sum += h(batch[b].feature(i));
    count += batch[b].k;
  }
  return sum / static_cast<double>(count);
}

double loo_prediction_mean(const BaggedSample& sample, std::span<const size_t> batch_indices,
                           size_t target_position, const Hypothesis& h) {
  std::vector<BagView> views;
  views.reserve(batch_indices.size());
  for (size_t idx : batch_indices) views.push_back(sample.bag(idx));
  return loo_prediction_mean(views, target_position, h);
}

SplitSampleResult split_sample_estimates(const BaggedSample& sample, size_t m2,
                                         std::span<const Hypothesis> hypotheses) {
  const size_t m = sample.bag_count();
  require(m2 >= 1 && m2 < m, Errc::InvalidSplit, "need 1 <= m2 < bag count");
  const size_t m1 = m - m2;

  double alpha_sum = 0.0;
  for (size_t j = m1; j < m; ++j) alpha_sum += sample.alpha(j);
  MarginalInfo info(alpha_sum / static_cast<double>(m2), Provenance::SplitSample);

  const double denom = static_cast<double>(m2 * sample.k());
  for (const Hypothesis& h : hypotheses) {
    double sum = 0.0;
    for (size_t j = m1; j < m; ++j) {
      for (size_t i = 0; i < sample.k(); ++i) sum += h(sample.feature(j, i));
    }
    info.set_mean_prediction(h.id(), sum / denom);
  }
  return {std::move(info), sample.slice(0, m1)};
}

}  // namespace llp
