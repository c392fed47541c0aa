#include "llp/losses.hpp"

#include <algorithm>
#include <cmath>

namespace llp {

namespace {

// Small stack buffer for per-bag predictions; spills for very large bags.
std::vector<double> eval_hypothesis(const Hypothesis& h, const BagView& bag) {
  std::vector<double> values(bag.k);
  for (size_t i = 0; i < bag.k; ++i) values[i] = h(bag.feature(i));
  return values;
}

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void check_theta(double theta) {
  require(theta > 0.0 && theta < 1.0, Errc::ThetaOutOfRange, "theta must lie in (0,1)");
}

}  // namespace

std::string LossKind::label() const {
  switch (variant) {
    case LossVariant::OursClipped: return "ours_clipped";
    case LossVariant::OursUnclipped: return "ours_unclipped";
    case LossVariant::LiEtAl: return "li";
    case LossVariant::EasyLLP: return "easyllp";
    case LossVariant::VanillaSQ: return "vanilla_sq";
    case LossVariant::VanillaCE: return "vanilla_ce";
  }
  return "unknown";
}

double binary_cross_entropy(double prediction, double target, double clamp_eps) {
  const double q = std::clamp(prediction, clamp_eps, 1.0 - clamp_eps);
  return -target * std::log(q) - (1.0 - target) * std::log(1.0 - q);
}

double clip_threshold(ThresholdMode mode, size_t k, double theta) {
  check_theta(theta);
  const double kk = static_cast<double>(k);
  if (mode == ThresholdMode::Known) return std::sqrt(8.0 * kk * std::log(2.0 / theta));
  return std::sqrt(18.0 * kk * std::log(6.0 / theta));
}

EasyLlpWeights easyllp_weights(size_t k, double alpha, double p) {
  const double kk = static_cast<double>(k);
  return {kk * alpha - (kk - 1.0) * p, kk * (1.0 - alpha) - (kk - 1.0) * (1.0 - p)};
}

BagStat bag_stat_from_values(std::span<const double> h_values, double alpha, double p,
                             double mean_prediction) {
  const double kk = static_cast<double>(h_values.size());
  return {kk * (alpha - p), sum(h_values) - kk * mean_prediction};
}

BagLossValue ours_unclipped_from_values(std::span<const double> h_values, double alpha, double p,
                                        double mean_prediction) {
  const BagStat s = bag_stat_from_values(h_values, alpha, p, mean_prediction);
  const double dev = s.k_alpha_tilde - s.e_tilde;
  const double bias = mean_prediction - p;
  return {dev * dev / static_cast<double>(h_values.size()) + bias * bias, false};
}

BagLossValue ours_clipped_from_values(std::span<const double> h_values, double alpha, double p,
                                      double mean_prediction, double theta, ThresholdMode mode) {
  const double threshold = clip_threshold(mode, h_values.size(), theta);
  const BagStat s = bag_stat_from_values(h_values, alpha, p, mean_prediction);
  const double dev = s.k_alpha_tilde - s.e_tilde;
  const double bias = mean_prediction - p;
  // Inclusive comparison; the additive bias term is never clipped.
  if (std::abs(dev) <= threshold) {
    return {dev * dev / static_cast<double>(h_values.size()) + bias * bias, false};
  }
  return {bias * bias, true};
}

BagLossValue li_loss_from_values(std::span<const double> h_values, double alpha, double p,
                                 double mean_prediction) {
  const double kk = static_cast<double>(h_values.size());
  const double resid = kk * alpha - sum(h_values);
  const double bias = mean_prediction - p;
  return {resid * resid / kk - (kk - 1.0) * bias * bias, false};
}

BagLossValue easyllp_loss_from_values(std::span<const double> h_values, double alpha, double p,
                                      double clamp_eps) {
  const auto [w1, w0] = easyllp_weights(h_values.size(), alpha, p);
  double total = 0.0;
  for (double hv : h_values) {
    total += w1 * binary_cross_entropy(hv, 1.0, clamp_eps) +
             w0 * binary_cross_entropy(hv, 0.0, clamp_eps);
  }
  return {total / static_cast<double>(h_values.size()), false};
}

BagLossValue easyllp_square_loss_from_values(std::span<const double> h_values, double alpha,
                                             double p) {
  const auto [w1, w0] = easyllp_weights(h_values.size(), alpha, p);
  double total = 0.0;
  for (double hv : h_values) {
    total += w1 * (1.0 - hv) * (1.0 - hv) + w0 * hv * hv;
  }
  return {total / static_cast<double>(h_values.size()), false};
}

BagLossValue vanilla_sq_from_values(std::span<const double> h_values, double alpha) {
  const double mean = sum(h_values) / static_cast<double>(h_values.size());
  return {(mean - alpha) * (mean - alpha), false};
}

BagLossValue vanilla_ce_from_values(std::span<const double> h_values, double alpha,
                                    double clamp_eps) {
  const double mean = sum(h_values) / static_cast<double>(h_values.size());
  return {binary_cross_entropy(mean, alpha, clamp_eps), false};
}

BagStat bag_stat(const Hypothesis& h, const BagView& bag, const MarginalInfo& info) {
  return bag_stat_from_values(eval_hypothesis(h, bag), bag.alpha, info.p(),
                              info.mean_prediction(h.id()));
}

BagLossValue ours_unclipped(const Hypothesis& h, const BagView& bag, const MarginalInfo& info) {
  return ours_unclipped_from_values(eval_hypothesis(h, bag), bag.alpha, info.p(),
                                    info.mean_prediction(h.id()));
}

BagLossValue ours_clipped(const Hypothesis& h, const BagView& bag, const MarginalInfo& info,
                          double theta, ThresholdMode mode) {
  return ours_clipped_from_values(eval_hypothesis(h, bag), bag.alpha, info.p(),
                                  info.mean_prediction(h.id()), theta, mode);
}

BagLossValue li_loss(const Hypothesis& h, const BagView& bag, const MarginalInfo& info) {
  return li_loss_from_values(eval_hypothesis(h, bag), bag.alpha, info.p(),
                             info.mean_prediction(h.id()));
}

BagLossValue easyllp_loss(const Hypothesis& h, const BagView& bag, const MarginalInfo& info,
                          double clamp_eps) {
  return easyllp_loss_from_values(eval_hypothesis(h, bag), bag.alpha, info.p(), clamp_eps);
}

BagLossValue easyllp_square_loss(const Hypothesis& h, const BagView& bag,
                                 const MarginalInfo& info) {
  return easyllp_square_loss_from_values(eval_hypothesis(h, bag), bag.alpha, info.p());
}

BagLossValue vanilla_sq(const Hypothesis& h, const BagView& bag) {
  return vanilla_sq_from_values(eval_hypothesis(h, bag), bag.alpha);
}

BagLossValue vanilla_ce(const Hypothesis& h, const BagView& bag, double clamp_eps) {
  return vanilla_ce_from_values(eval_hypothesis(h, bag), bag.alpha, clamp_eps);
}

BagLossValue eval_bag_loss(const LossKind& kind, const Hypothesis& h, const BagView& bag,
                           const MarginalInfo* info) {
  const bool needs_info = kind.variant != LossVariant::VanillaSQ &&
                          kind.variant != LossVariant::VanillaCE;
  if (needs_info) {
    require(info != nullptr, Errc::MissingMarginal, "loss requires marginal info");
  }
  switch (kind.variant) {
    case LossVariant::OursClipped:
      return ours_clipped(h, bag, *info, kind.theta, kind.threshold_mode);
    case LossVariant::OursUnclipped: return ours_unclipped(h, bag, *info);
    case LossVariant::LiEtAl: return li_loss(h, bag, *info);
    case LossVariant::EasyLLP: return easyllp_loss(h, bag, *info, kind.clamp_eps);
    case LossVariant::VanillaSQ: return vanilla_sq(h, bag);
    case LossVariant::VanillaCE: return vanilla_ce(h, bag, kind.clamp_eps);
  }
  raise(Errc::InvalidArgument, "unknown loss variant");
}

double linear_bag_loss_grad_into(std::span<const double> w, const BagView& bag,
                                 std::span<const double> mu_x, double mu_y,
                                 std::span<double> grad_out) {
  const size_t dim = w.size();
  require(bag.dim == dim && mu_x.size() == dim, Errc::DimensionMismatch,
          "weight / feature / mean dimensions differ");
  const bool want_grad = !grad_out.empty();
  if (want_grad) {
    require(grad_out.size() == dim, Errc::DimensionMismatch, "gradient buffer size");
  }

  const double kk = static_cast<double>(bag.k);
  double centered_dot = 0.0;  // w . (xbar - mu_x)
  double mean_dot = 0.0;      // w . mu_x
  for (size_t d = 0; d < dim; ++d) {
    double centroid = 0.0;
    for (size_t i = 0; i < bag.k; ++i) centroid += bag.features[i * dim + d];
    centroid /= kk;
    const double centered = centroid - mu_x[d];
    centered_dot += w[d] * centered;
    mean_dot += w[d] * mu_x[d];
    if (want_grad) grad_out[d] = centered;  // stash xbar - mu_x
  }

  const double bag_resid = centered_dot - (bag.alpha - mu_y);
  const double mean_resid = mean_dot - mu_y;
  if (want_grad) {
    for (size_t d = 0; d < dim; ++d) {
      grad_out[d] = 2.0 * kk * bag_resid * grad_out[d] + 2.0 * mean_resid * mu_x[d];
    }
  }
  return kk * bag_resid * bag_resid + mean_resid * mean_resid;
}

LinearBagLoss linear_bag_loss_and_grad(std::span<const double> w, const BagView& bag,
                                       std::span<const double> mu_x, double mu_y) {
  LinearBagLoss out;
  out.grad.resize(w.size());
  out.value = linear_bag_loss_grad_into(w, bag, mu_x, mu_y, out.grad);
  return out;
}

}  // namespace llp
