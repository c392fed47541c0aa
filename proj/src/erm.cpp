#include "llp/erm.hpp"

#include <cmath>
#include <limits>

namespace llp {

namespace {

// Neumaier-compensated accumulation keeps the empirical means invariant to
// bag order down to the final rounding.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

ErmResult erm_fit(const BaggedSample& sample, std::span<const Hypothesis> hypotheses,
                  const ErmConfig& config) {
  require(!hypotheses.empty(), Errc::EmptyHypothesisClass, "no hypotheses");
  require(config.theta > 0.0 && config.theta < 1.0, Errc::ThetaOutOfRange,
          "theta must lie in (0,1)");

  const BaggedSample* training = &sample;
  BaggedSample split_training(sample.k(), sample.dim(), sample.mode());
  MarginalInfo info(0.0, Provenance::Exact);
  ThresholdMode threshold_mode = ThresholdMode::Known;

  if (config.mode == ErmConfig::MarginalMode::Exact) {
    require(config.exact_info.has_value(), Errc::MissingMarginal,
            "Exact mode requires marginal info");
    info = *config.exact_info;
    for (const Hypothesis& h : hypotheses) {
      require(info.has_mean_prediction(h.id()), Errc::MissingMarginal,
              "missing E[h(x)] for hypothesis " + std::to_string(h.id()));
    }
  } else {
    const size_t m2 = config.m2 > 0 ? config.m2 : default_split_m2(sample.bag_count());
    auto split = split_sample_estimates(sample, m2, hypotheses);
    info = std::move(split.info);
    split_training = std::move(split.training);
    training = &split_training;
    threshold_mode = ThresholdMode::Estimated;
  }
  require(training->bag_count() >= 1, Errc::EmptySample, "no training bags after split");

  ErmResult result;
  double best = std::numeric_limits<double>::infinity();
  int best_id = 0;
  bool first = true;
  std::vector<double> h_values(training->k());

  for (const Hypothesis& h : hypotheses) {
    const double p = info.p();
    const double mean_pred = info.mean_prediction(h.id());
    CompensatedSum acc;
    size_t clips = 0;
    for (size_t j = 0; j < training->bag_count(); ++j) {
      for (size_t i = 0; i < training->k(); ++i) h_values[i] = h(training->feature(j, i));
      const BagLossValue v = ours_clipped_from_values(h_values, training->alpha(j), p, mean_pred,
                                                      config.theta, threshold_mode);
      acc.add(v.value);
      clips += v.clipped ? 1 : 0;
    }
    const double mean_loss = acc.value() / static_cast<double>(training->bag_count());
    result.empirical_losses[h.id()] = mean_loss;
    result.clip_counts[h.id()] = clips;
    if (first || mean_loss < best || (mean_loss == best && h.id() < best_id)) {
      best = mean_loss;
      best_id = h.id();
      first = false;
    }
  }
  result.chosen = best_id;
  return result;
}

double population_square_loss(const FiniteDistribution& dist, const Hypothesis& h) {
  double loss = 0.0;
  for (const auto& a : dist.atoms()) {
    const double hv = h(a.feature);
    loss += a.mass * (a.eta * (1.0 - hv) * (1.0 - hv) + (1.0 - a.eta) * hv * hv);
  }
  return loss;
}

double population_ce_loss(const FiniteDistribution& dist, const Hypothesis& h, double clamp_eps) {
  double loss = 0.0;
  for (const auto& a : dist.atoms()) {
    const double hv = h(a.feature);
    loss += a.mass * (a.eta * binary_cross_entropy(hv, 1.0, clamp_eps) +
                      (1.0 - a.eta) * binary_cross_entropy(hv, 0.0, clamp_eps));
  }
  return loss;
}

double population_regret(const FiniteDistribution& dist, std::span<const Hypothesis> hypotheses,
                         int chosen_id) {
  require(!hypotheses.empty(), Errc::EmptyHypothesisClass, "no hypotheses");
  double best = std::numeric_limits<double>::infinity();
  double chosen = std::numeric_limits<double>::quiet_NaN();
  bool found = false;
  for (const Hypothesis& h : hypotheses) {
    const double loss = population_square_loss(dist, h);
    best = std::min(best, loss);
    if (h.id() == chosen_id) {
      chosen = loss;
      found = true;
    }
  }
  require(found, Errc::InvalidArgument, "chosen id is not in the hypothesis class");
  return chosen - best;
}

}  // namespace llp
