#pragma once

#include <span>
#include <string>
#include <vector>

#include "llp/types.hpp"

namespace llp {

// Which concentration threshold guards the clipped quadratic term:
//   Known      uses sqrt(8 k ln(2/theta))   (marginals known exactly)
//   Estimated  uses sqrt(18 k ln(6/theta))  (marginals estimated from a split)
enum class ThresholdMode { Known, Estimated };

inline constexpr double kDefaultClampEps = 1e-7;

enum class LossVariant { OursClipped, OursUnclipped, LiEtAl, EasyLLP, VanillaSQ, VanillaCE };

// One aggregate loss estimator over a single bag. theta only matters for
// OursClipped; clamp_eps only for the cross-entropy based variants.
struct LossKind {
  LossVariant variant = LossVariant::OursUnclipped;
  double theta = 0.1;
  ThresholdMode threshold_mode = ThresholdMode::Known;
  double clamp_eps = kDefaultClampEps;

  static LossKind ours_clipped(double theta, ThresholdMode mode = ThresholdMode::Known) {
    return {LossVariant::OursClipped, theta, mode, kDefaultClampEps};
  }
  static LossKind ours_unclipped() { return {LossVariant::OursUnclipped}; }
  static LossKind li() { return {LossVariant::LiEtAl}; }
  static LossKind easyllp(double clamp_eps = kDefaultClampEps) {
    return {LossVariant::EasyLLP, 0.1, ThresholdMode::Known, clamp_eps};
  }
  static LossKind vanilla_sq() { return {LossVariant::VanillaSQ}; }
  static LossKind vanilla_ce(double clamp_eps = kDefaultClampEps) {
    return {LossVariant::VanillaCE, 0.1, ThresholdMode::Known, clamp_eps};
  }

  std::string label() const;
};

struct BagLossValue {
  double value = 0.0;
  bool clipped = false;  // true when a clipping indicator zeroed the quadratic term
};

// Centered bag statistics: k_alpha_tilde = k (alpha - p) and
// e_tilde = sum_i h(x_i) - k E[h(x)].
struct BagStat {
  double k_alpha_tilde = 0.0;
  double e_tilde = 0.0;
};

// Binary cross-entropy with the prediction clamped into
// [clamp_eps, 1 - clamp_eps]; target may be any value in [0, 1].
double binary_cross_entropy(double prediction, double target, double clamp_eps);

// Clipping threshold for the given mode; natural logarithms throughout.
// theta must lie in (0, 1).
double clip_threshold(ThresholdMode mode, size_t k, double theta);

// ---------------------------------------------------------------------------
// Value-level layer: h already evaluated on the bag's features. These are the
// single source of truth for the estimator formulas; the Hypothesis layer and
// the experiment harness both delegate here.
// ---------------------------------------------------------------------------

BagStat bag_stat_from_values(std::span<const double> h_values, double alpha, double p,
                             double mean_prediction);

BagLossValue ours_unclipped_from_values(std::span<const double> h_values, double alpha, double p,
                                        double mean_prediction);

BagLossValue ours_clipped_from_values(std::span<const double> h_values, double alpha, double p,
                                      double mean_prediction, double theta, ThresholdMode mode);

BagLossValue li_loss_from_values(std::span<const double> h_values, double alpha, double p,
                                 double mean_prediction);

BagLossValue easyllp_loss_from_values(std::span<const double> h_values, double alpha, double p,
                                      double clamp_eps);

// EasyLLP weighting applied to per-example square loss instead of
// cross-entropy; an unbiased estimate of E[(y - h(x))^2].
BagLossValue easyllp_square_loss_from_values(std::span<const double> h_values, double alpha,
                                             double p);

BagLossValue vanilla_sq_from_values(std::span<const double> h_values, double alpha);

BagLossValue vanilla_ce_from_values(std::span<const double> h_values, double alpha,
                                    double clamp_eps);

// EasyLLP weights: w1 = k alpha - (k-1) p, w0 = k (1-alpha) - (k-1)(1-p).
struct EasyLlpWeights {
  double w1 = 0.0;
  double w0 = 0.0;
};
EasyLlpWeights easyllp_weights(size_t k, double alpha, double p);

// ---------------------------------------------------------------------------
// Hypothesis layer: evaluates h on the bag and delegates to the value layer.
// info must hold E[h(x)] for h (MissingMarginal otherwise).
// ---------------------------------------------------------------------------

BagStat bag_stat(const Hypothesis& h, const BagView& bag, const MarginalInfo& info);
BagLossValue ours_unclipped(const Hypothesis& h, const BagView& bag, const MarginalInfo& info);
BagLossValue ours_clipped(const Hypothesis& h, const BagView& bag, const MarginalInfo& info,
                          double theta, ThresholdMode mode);
BagLossValue li_loss(const Hypothesis& h, const BagView& bag, const MarginalInfo& info);
BagLossValue easyllp_loss(const Hypothesis& h, const BagView& bag, const MarginalInfo& info,
                          double clamp_eps = kDefaultClampEps);
BagLossValue easyllp_square_loss(const Hypothesis& h, const BagView& bag,
                                 const MarginalInfo& info);
BagLossValue vanilla_sq(const Hypothesis& h, const BagView& bag);
BagLossValue vanilla_ce(const Hypothesis& h, const BagView& bag,
                        double clamp_eps = kDefaultClampEps);

// Dispatch on LossKind; info may be null for the vanilla variants.
BagLossValue eval_bag_loss(const LossKind& kind, const Hypothesis& h, const BagView& bag,
                           const MarginalInfo* info);

// ---------------------------------------------------------------------------
// Linear-model path: debiased bag-level square loss for h(x) = w.x with known
// feature/label means, and its analytic gradient.
//   value = k (w.(xbar - mu_x) - (alpha - mu_y))^2 + (w.mu_x - mu_y)^2
//   grad  = 2k (w.(xbar - mu_x) - (alpha - mu_y)) (xbar - mu_x)
//           + 2 (w.mu_x - mu_y) mu_x
// ---------------------------------------------------------------------------

struct LinearBagLoss {
  double value = 0.0;
  std::vector<double> grad;
};

LinearBagLoss linear_bag_loss_and_grad(std::span<const double> w, const BagView& bag,
                                       std::span<const double> mu_x, double mu_y);

// Allocation-free variant for the SGD loop; grad_out must have w.size() slots.
double linear_bag_loss_grad_into(std::span<const double> w, const BagView& bag,
                                 std::span<const double> mu_x, double mu_y,
                                 std::span<double> grad_out);

}  // namespace llp
