#include "llp/sgd.hpp"

#include <algorithm>
#include <cmath>

#include "llp/losses.hpp"
#include "llp/rng.hpp"

namespace llp {

RegressionDesign RegressionDesign::create(std::vector<Atom> atoms) {
  require(!atoms.empty(), Errc::EmptySupport, "design support is empty");
  RegressionDesign design;
  design.dim_ = atoms.front().feature.size();
  require(design.dim_ >= 1, Errc::InvalidArgument, "feature dimension must be >= 1");

  double total = 0.0;
  for (Atom& a : atoms) {
    require(a.feature.size() == design.dim_, Errc::DimensionMismatch,
            "support feature dimensions differ");
    require(a.mass >= 0.0, Errc::NegativeMass, "negative probability mass");
    require(!a.labels.empty(), Errc::InvalidArgument, "atom without label distribution");
    double label_total = 0.0;
    for (const LabelAtom& l : a.labels) {
      require(l.prob >= 0.0, Errc::NegativeMass, "negative label probability");
      label_total += l.prob;
    }
    require(std::abs(label_total - 1.0) <= kMassDriftTolerance, Errc::MassNotOne,
            "label probabilities sum to " + std::to_string(label_total));
    if (label_total != 1.0) {
      for (LabelAtom& l : a.labels) l.prob /= label_total;
    }
    total += a.mass;
  }
  require(std::abs(total - 1.0) <= kMassDriftTolerance, Errc::MassNotOne,
          "masses sum to " + std::to_string(total));
  if (total != 1.0) {
    for (Atom& a : atoms) a.mass /= total;
  }

  design.atoms_ = std::move(atoms);
  design.y_mean_.reserve(design.atoms_.size());
  design.y_sq_mean_.reserve(design.atoms_.size());
  for (const Atom& a : design.atoms_) {
    double mean = 0.0;
    double sq = 0.0;
    for (const LabelAtom& l : a.labels) {
      mean += l.prob * l.y;
      sq += l.prob * l.y * l.y;
    }
    design.y_mean_.push_back(mean);
    design.y_sq_mean_.push_back(sq);
  }
  return design;
}

RegressionDesign RegressionDesign::from_classification(const FiniteDistribution& dist) {
  std::vector<Atom> atoms;
  atoms.reserve(dist.size());
  for (const auto& a : dist.atoms()) {
    atoms.push_back({a.feature, a.mass, {{0.0, 1.0 - a.eta}, {1.0, a.eta}}});
  }
  return create(std::move(atoms));
}

std::vector<double> RegressionDesign::mu_x() const {
  std::vector<double> mean(dim_, 0.0);
  for (const Atom& a : atoms_) {
    for (size_t d = 0; d < dim_; ++d) mean[d] += a.mass * a.feature[d];
  }
  return mean;
}

double RegressionDesign::mu_y() const {
  double mean = 0.0;
  for (size_t i = 0; i < atoms_.size(); ++i) mean += atoms_[i].mass * y_mean_[i];
  return mean;
}

double RegressionDesign::max_feature_norm() const {
  double best = 0.0;
  for (const Atom& a : atoms_) {
    double sq = 0.0;
    for (double v : a.feature) sq += v * v;
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

double RegressionDesign::max_abs_label() const {
  double best = 0.0;
  for (const Atom& a : atoms_) {
    for (const LabelAtom& l : a.labels) best = std::max(best, std::abs(l.y));
  }
  return best;
}

Dataset RegressionDesign::sample(size_t n, uint64_t seed) const {
  require(n >= 1, Errc::InvalidArgument, "need n >= 1 samples");
  std::vector<double> cumulative;
  cumulative.reserve(atoms_.size());
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    acc += a.mass;
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;

  Rng rng(seed);
  Dataset data(dim_, Mode::Regression);
  data.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    double u = rng.uniform01();
    const size_t atom = std::min<size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin(),
        atoms_.size() - 1);
    const auto& labels = atoms_[atom].labels;
    u = rng.uniform01();
    double y = labels.back().y;
    double label_acc = 0.0;
    for (const LabelAtom& l : labels) {
      label_acc += l.prob;
      if (u < label_acc) {
        y = l.y;
        break;
      }
    }
    data.push_back(atoms_[atom].feature, y);
  }
  return data;
}

double population_linear_loss(const RegressionDesign& design, std::span<const double> w) {
  require(w.size() == design.dim(), Errc::DimensionMismatch, "weight dimension");
  double loss = 0.0;
  for (size_t i = 0; i < design.atoms().size(); ++i) {
    const auto& a = design.atoms()[i];
    double dot = 0.0;
    for (size_t d = 0; d < w.size(); ++d) dot += w[d] * a.feature[d];
    loss += a.mass * (design.label_sq_mean(i) - 2.0 * dot * design.label_mean(i) + dot * dot);
  }
  return loss;
}

SgdConstants derive_constants(const SgdParams& params) {
  require(params.rho_w > 0.0 && params.rho_x > 0.0 && params.rho_y > 0.0,
          Errc::NonPositiveBound, "norm bounds must be positive");
  require(params.m >= 1 && params.k >= 1, Errc::InvalidArgument, "need m >= 1 and k >= 1");
  require(params.l_star >= 0.0, Errc::InvalidArgument, "L* must be nonnegative");

  const double kk = static_cast<double>(params.k);
  const double mm = static_cast<double>(params.m);
  const double scale = params.rho_w * params.rho_x + params.rho_y;
  const double inner = 9.0 * kk * mm * scale * scale / (params.rho_w * params.rho_w *
                                                        params.rho_x * params.rho_x);
  SgdConstants c;
  c.theta = std::sqrt(8.0 / kk * std::log(inner));
  if (params.theta_override) c.theta = *params.theta_override;
  c.zeta = (kk * c.theta * c.theta + 1.0) * params.rho_x * params.rho_x;
  c.eta = 1.0 / (2.0 * c.zeta);
  if (params.l_star > 0.0) {
    c.eta = std::min(c.eta, params.rho_w / std::sqrt(2.0 * c.zeta * mm * params.l_star));
  }
  if (params.eta_override) c.eta = *params.eta_override;
  return c;
}

void project_ball_inplace(std::span<double> w, double rho) {
  require(rho > 0.0, Errc::NonPositiveBound, "radius must be positive");
  double sq = 0.0;
  for (double v : w) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm <= rho) return;
  const double scale = rho / norm;
  for (double& v : w) v *= scale;
}

std::vector<double> project_ball(std::span<const double> w, double rho) {
  std::vector<double> out(w.begin(), w.end());
  project_ball_inplace(out, rho);
  return out;
}

SgdTrace sgd_train(const BaggedSample& bags, const SgdParams& params, bool record_norms) {
  const size_t dim = params.mu_x.size();
  require(dim >= 1, Errc::DimensionMismatch, "mu_x is empty");
  require(bags.dim() == dim, Errc::DimensionMismatch, "bag dimension differs from mu_x");
  require(bags.k() == params.k, Errc::DimensionMismatch, "bag size differs from params.k");
  require(bags.bag_count() == params.m, Errc::DimensionMismatch,
          "bag count differs from params.m");

  const SgdConstants c = derive_constants(params);
  const double radius = c.theta * params.rho_x;
  const double rho_x_sq = params.rho_x * params.rho_x * (1.0 + 1e-12);

  SgdTrace trace;
  std::vector<double> w(dim, 0.0);
  std::vector<double> avg(dim, 0.0);
  std::vector<double> grad(dim, 0.0);
  std::vector<double> centroid(dim, 0.0);
  if (record_norms) trace.per_step_norms.reserve(params.m);

  for (size_t j = 0; j < params.m; ++j) {
    // w at the start of step j enters the average (w_1 = 0 included).
    for (size_t d = 0; d < dim; ++d) avg[d] += w[d];
    if (record_norms) {
      double sq = 0.0;
      for (double v : w) sq += v * v;
      trace.per_step_norms.push_back(std::sqrt(sq));
    }

    const BagView bag = bags.bag(j);
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (size_t i = 0; i < bag.k; ++i) {
      double ex_sq = 0.0;
      for (size_t d = 0; d < dim; ++d) {
        const double v = bag.features[i * dim + d];
        centroid[d] += v;
        ex_sq += v * v;
      }
      if (ex_sq > rho_x_sq) trace.feature_norm_violations += 1;
    }
    double dist_sq = 0.0;
    for (size_t d = 0; d < dim; ++d) {
      centroid[d] /= static_cast<double>(bag.k);
      const double diff = centroid[d] - params.mu_x[d];
      dist_sq += diff * diff;
    }

    if (std::sqrt(dist_sq) <= radius) {
      linear_bag_loss_grad_into(w, bag, params.mu_x, params.mu_y, grad);
      for (size_t d = 0; d < dim; ++d) w[d] -= c.eta * grad[d];
      project_ball_inplace(w, params.rho_w);
    } else {
      trace.skipped_bags += 1;
    }
  }

  trace.final_average = std::move(avg);
  for (double& v : trace.final_average) v /= static_cast<double>(params.m);
  return trace;
}

EstimatedMeans estimate_means_from_bags(const BaggedSample& bags, size_t prefix_bags) {
  require(prefix_bags >= 1 && prefix_bags < bags.bag_count(), Errc::InvalidSplit,
          "need 1 <= prefix < bag count");
  EstimatedMeans out{std::vector<double>(bags.dim(), 0.0), 0.0,
                     bags.slice(prefix_bags, bags.bag_count() - prefix_bags)};
  for (size_t j = 0; j < prefix_bags; ++j) {
    for (size_t i = 0; i < bags.k(); ++i) {
      const auto x = bags.feature(j, i);
      for (size_t d = 0; d < bags.dim(); ++d) out.mu_x[d] += x[d];
    }
  }
  const double n = static_cast<double>(prefix_bags * bags.k());
  for (double& v : out.mu_x) v /= n;

  double alpha_sum = 0.0;
  for (size_t j = 0; j < out.training.bag_count(); ++j) alpha_sum += out.training.alpha(j);
  out.mu_y = alpha_sum / static_cast<double>(out.training.bag_count());
  return out;
}

}  // namespace llp
