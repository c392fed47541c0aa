#pragma once

#include <optional>
#include <span>
#include <vector>

#include "llp/bagging.hpp"
#include "llp/types.hpp"

namespace llp {

// Finite-support regression law: each feature atom carries a finite
// conditional label distribution. Exactly enumerable, so population losses
// and marginal means are available in closed form. Classification laws embed
// via labels {0, 1} with probabilities {1 - eta, eta}.
class RegressionDesign {
 public:
  struct LabelAtom {
    double y;
    double prob;
  };
  struct Atom {
    std::vector<double> feature;
    double mass;
    std::vector<LabelAtom> labels;
  };

  static RegressionDesign create(std::vector<Atom> atoms);
  static RegressionDesign from_classification(const FiniteDistribution& dist);

  size_t dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double label_mean(size_t atom) const { return y_mean_[atom]; }
  double label_sq_mean(size_t atom) const { return y_sq_mean_[atom]; }

  std::vector<double> mu_x() const;
  double mu_y() const;
  double max_feature_norm() const;
  double max_abs_label() const;

  Dataset sample(size_t n, uint64_t seed) const;

 private:
  RegressionDesign() = default;
  size_t dim_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> y_mean_;
  std::vector<double> y_sq_mean_;
};

// Exact E[(y - w.x)^2] = sum_x mass(x) (E[y^2|x] - 2 (w.x) E[y|x] + (w.x)^2).
double population_linear_loss(const RegressionDesign& design, std::span<const double> w);

// Inputs of the truncated projected SGD run. mu_x and mu_y are the exact
// marginal means; rho_* are the norm bounds; l_star is the optimistic bound
// on the best-in-class loss (0 = realizable stance).
struct SgdParams {
  double rho_w = 1.0;
  double rho_x = 1.0;
  double rho_y = 1.0;
  std::vector<double> mu_x;
  double mu_y = 0.0;
  double l_star = 0.0;
  size_t m = 0;
  size_t k = 0;
  std::optional<double> eta_override;
  std::optional<double> theta_override;
};

struct SgdConstants {
  double theta = 0.0;  // truncation threshold multiplier
  double zeta = 0.0;   // smoothness constant (k theta^2 + 1) rho_x^2
  double eta = 0.0;    // step size min{rho_w / sqrt(2 zeta m L*), 1 / (2 zeta)}
};

// Closed-form constants:
//   theta = sqrt((8/k) ln(9 k m (rho_w rho_x + rho_y)^2 / (rho_w^2 rho_x^2)))
//   zeta  = (k theta^2 + 1) rho_x^2
//   eta   = min{rho_w / sqrt(2 zeta m L*), 1/(2 zeta)}  (second arm when L* = 0)
// Overrides in params replace theta and/or eta after derivation.
SgdConstants derive_constants(const SgdParams& params);

// Euclidean projection onto the ball of radius rho.
std::vector<double> project_ball(std::span<const double> w, double rho);
void project_ball_inplace(std::span<double> w, double rho);

struct SgdTrace {
  std::vector<double> final_average;    // uniform average of iterates w_1..w_m
  size_t skipped_bags = 0;              // bags whose update was truncated away
  size_t feature_norm_violations = 0;   // examples with ||x|| > rho_x
  std::vector<double> per_step_norms;   // ||w_j|| per step, when recorded
};

// Projected SGD on the truncated bag-level square loss: starting from w1 = 0,
// each bag either performs w_{j+1} = Proj(w_j - eta * grad) when its centroid
// passes ||xbar_j - mu_x|| <= theta rho_x, or is skipped (w_{j+1} = w_j).
// Skipped bags still occupy their slot in the final average. Feature-norm
// violations are counted in the trace rather than aborting the run.
SgdTrace sgd_train(const BaggedSample& bags, const SgdParams& params, bool record_norms = false);

struct EstimatedMeans {
  std::vector<double> mu_x;
  double mu_y = 0.0;
  BaggedSample training;  // the bags after the prefix
};

// Plug-in estimates when exact means are unavailable: mu_x from the features
// of an unlabeled prefix of bags, mu_y from the alphas of the remaining bags,
// which are returned for training. Not covered by the excess-risk guarantees
// of the exact-means setting.
EstimatedMeans estimate_means_from_bags(const BaggedSample& bags, size_t prefix_bags);

}  // namespace llp
