#pragma once

#include <map>
#include <optional>
#include <span>

#include "llp/bagging.hpp"
#include "llp/losses.hpp"
#include "llp/marginals.hpp"
#include "llp/types.hpp"

namespace llp {

// Empirical risk minimization over a finite class with the clipped bag-level
// square loss. Exact mode consumes caller-supplied marginals and the Known
// threshold; SplitSample mode estimates them on the last m2 bags and trains
// on the rest with the Estimated threshold.
struct ErmConfig {
  double theta = 0.0;
  enum class MarginalMode { Exact, SplitSample } mode = MarginalMode::Exact;
  std::optional<MarginalInfo> exact_info;  // required in Exact mode
  size_t m2 = 0;                           // 0 -> default ceil(m/2) in SplitSample mode

  // Theorem-default clipping parameter for target regret beta: beta / (16 k^2).
  static double default_theta(double beta, size_t k) {
    return beta / (16.0 * static_cast<double>(k) * static_cast<double>(k));
  }
};

struct ErmResult {
  int chosen = 0;                          // argmin id; ties break to the lowest id
  std::map<int, double> empirical_losses;  // mean clipped loss per hypothesis
  std::map<int, size_t> clip_counts;       // bags whose quadratic term was clipped
};

ErmResult erm_fit(const BaggedSample& sample, std::span<const Hypothesis> hypotheses,
                  const ErmConfig& config);

// Exact population square loss sum_x mass(x) [eta (1-h)^2 + (1-eta) h^2].
double population_square_loss(const FiniteDistribution& dist, const Hypothesis& h);

// Exact population cross-entropy with the same clamping as easyllp_loss.
double population_ce_loss(const FiniteDistribution& dist, const Hypothesis& h,
                          double clamp_eps = kDefaultClampEps);

// L(chosen) - min_h L(h), computed exactly from the distribution.
double population_regret(const FiniteDistribution& dist, std::span<const Hypothesis> hypotheses,
                         int chosen_id);

}  // namespace llp
