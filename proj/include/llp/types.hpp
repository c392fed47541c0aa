#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llp/errors.hpp"
#include "llp/rng.hpp"

namespace llp {

// Labels are stored as reals in both modes; the mode decides which invariants
// apply (binary labels and alpha*k integral in classification, |y| bounded in
// regression).
enum class Mode { Classification, Regression };

inline constexpr double kMassDriftTolerance = 1e-9;
inline constexpr double kAlphaCountTolerance = 1e-9;

// Dense dataset with one row per example. Struct-of-arrays so that sampling
// a million examples does not allocate a million vectors.
class Dataset {
 public:
  Dataset(size_t dim, Mode mode) : dim_(dim), mode_(mode) {
    require(dim >= 1, Errc::InvalidArgument, "feature dimension must be >= 1");
  }

  size_t size() const { return labels_.size(); }
  size_t dim() const { return dim_; }
  Mode mode() const { return mode_; }

  std::span<const double> feature(size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  double label(size_t i) const { return labels_[i]; }

  void push_back(std::span<const double> x, double y);
  void reserve(size_t n) {
    features_.reserve(n * dim_);
    labels_.reserve(n);
  }

 private:
  size_t dim_;
  Mode mode_;
  std::vector<double> features_;
  std::vector<double> labels_;
};

// Non-owning view of one bag: k feature vectors and their label proportion.
struct BagView {
  size_t k = 0;
  size_t dim = 0;
  const double* features = nullptr;  // k * dim, row-major
  double alpha = 0.0;

  std::span<const double> feature(size_t i) const { return {features + i * dim, dim}; }
};

// Owning bag. alpha is the mean label of the k (hidden) examples.
class Bag {
 public:
  Bag(std::vector<std::vector<double>> features, double alpha, Mode mode);

  size_t k() const { return k_; }
  size_t dim() const { return dim_; }
  double alpha() const { return alpha_; }
  std::span<const double> feature(size_t i) const { return {flat_.data() + i * dim_, dim_}; }
  BagView view() const { return {k_, dim_, flat_.data(), alpha_}; }

 private:
  size_t k_;
  size_t dim_;
  double alpha_;
  std::vector<double> flat_;
};

// Exactly enumerable joint law over (feature, label) for binary labels:
// atoms carry a probability mass and the conditional positive probability
// eta(x) = P(y=1 | x). Ground truth for oracles and synthetic sampling.
class FiniteDistribution {
 public:
  struct Atom {
    std::vector<double> feature;
    double mass;
    double eta;
  };

  static FiniteDistribution create(std::vector<Atom> atoms);

  size_t size() const { return atoms_.size(); }
  size_t dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(size_t i) const { return atoms_[i]; }

  // Index of the atom whose feature equals x exactly, if any.
  std::optional<size_t> find_atom(std::span<const double> x) const;

 private:
  FiniteDistribution() = default;
  size_t dim_ = 0;
  std::vector<Atom> atoms_;
};

FiniteDistribution make_finite_distribution(std::vector<FiniteDistribution::Atom> atoms);

// n i.i.d. examples: feature drawn by atom mass, label ~ Bernoulli(eta(x)).
// Pure function of (dist, n, seed).
Dataset sample_dataset(const FiniteDistribution& dist, size_t n, uint64_t seed);

// A model x -> [0, 1] with a stable identifier. Tabular hypotheses are
// defined on the support of a finite distribution; linear ones clamp w.x into
// [0, 1] so they can act as classifiers.
class Hypothesis {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  Hypothesis(int id, Fn fn) : id_(id), fn_(std::move(fn)) {}

  int id() const { return id_; }
  double operator()(std::span<const double> x) const { return fn_(x); }

  static Hypothesis constant(int id, double value);
  static Hypothesis linear_clamped(int id, std::vector<double> weights);
  // values[i] is the prediction on support.atom(i). Evaluation on a feature
  // outside the support raises HypothesisUndefinedOnSupport.
  static Hypothesis tabular(int id, const FiniteDistribution& support, std::vector<double> values);

 private:
  int id_;
  Fn fn_;
};

enum class Provenance { Exact, SplitSample, LeaveOneBagOut };

const char* provenance_name(Provenance p);

// The pair (p, E[h(x)]) feeding every debiased loss: the label marginal and
// the per-hypothesis mean prediction, tagged with how they were obtained.
class MarginalInfo {
 public:
  MarginalInfo(double p, Provenance provenance);

  double p() const { return p_; }
  Provenance provenance() const { return provenance_; }

  void set_mean_prediction(int hypothesis_id, double value);
  bool has_mean_prediction(int hypothesis_id) const {
    return mean_predictions_.count(hypothesis_id) > 0;
  }
  // Raises MissingMarginal if the hypothesis was never registered.
  double mean_prediction(int hypothesis_id) const;

  const std::map<int, double>& mean_predictions() const { return mean_predictions_; }

 private:
  double p_;
  Provenance provenance_;
  std::map<int, double> mean_predictions_;
};

}  // namespace llp
