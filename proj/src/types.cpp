#include "llp/types.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace llp {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NegativeMass: return "NegativeMass";
    case Errc::MassNotOne: return "MassNotOne";
    case Errc::EtaOutOfRange: return "EtaOutOfRange";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::BagSizeExceedsData: return "BagSizeExceedsData";
    case Errc::BatchSmallerThanBag: return "BatchSmallerThanBag";
    case Errc::EmptySample: return "EmptySample";
    case Errc::SingleBagBatch: return "SingleBagBatch";
    case Errc::InvalidSplit: return "InvalidSplit";
    case Errc::MissingMarginal: return "MissingMarginal";
    case Errc::ThetaOutOfRange: return "ThetaOutOfRange";
    case Errc::HypothesisUndefinedOnSupport: return "HypothesisUndefinedOnSupport";
    case Errc::EmptyHypothesisClass: return "EmptyHypothesisClass";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonPositiveBound: return "NonPositiveBound";
    case Errc::EnumerationTooLarge: return "EnumerationTooLarge";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "UnknownError";
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Exact: return "Exact";
    case Provenance::SplitSample: return "SplitSample";
    case Provenance::LeaveOneBagOut: return "LeaveOneBagOut";
  }
  return "Unknown";
}

void Dataset::push_back(std::span<const double> x, double y) {
  require(x.size() == dim_, Errc::DimensionMismatch, "example dimension differs from dataset");
  if (mode_ == Mode::Classification) {
    require(y == 0.0 || y == 1.0, Errc::InvalidArgument, "classification label must be 0 or 1");
  }
  features_.insert(features_.end(), x.begin(), x.end());
  labels_.push_back(y);
}

Bag::Bag(std::vector<std::vector<double>> features, double alpha, Mode mode)
    : k_(features.size()), alpha_(alpha) {
  require(k_ >= 1, Errc::InvalidArgument, "bag needs at least one feature vector");
  dim_ = features.front().size();
  flat_.reserve(k_ * dim_);
  for (const auto& f : features) {
    require(f.size() == dim_, Errc::DimensionMismatch, "bag feature dimensions differ");
    flat_.insert(flat_.end(), f.begin(), f.end());
  }
  if (mode == Mode::Classification) {
    require(alpha >= 0.0 && alpha <= 1.0, Errc::InvalidArgument, "alpha outside [0,1]");
    const double count = alpha * static_cast<double>(k_);
    require(std::abs(count - std::round(count)) <= kAlphaCountTolerance, Errc::InvalidArgument,
            "alpha * k is not an integer positive count");
  }
}

FiniteDistribution FiniteDistribution::create(std::vector<Atom> atoms) {
  require(!atoms.empty(), Errc::EmptySupport, "distribution support is empty");
  FiniteDistribution dist;
  dist.dim_ = atoms.front().feature.size();
  require(dist.dim_ >= 1, Errc::InvalidArgument, "feature dimension must be >= 1");
  double total = 0.0;
  for (const Atom& a : atoms) {
    require(a.feature.size() == dist.dim_, Errc::DimensionMismatch,
            "support feature dimensions differ");
    require(a.mass >= 0.0, Errc::NegativeMass, "negative probability mass");
    require(a.eta >= 0.0 && a.eta <= 1.0, Errc::EtaOutOfRange, "eta outside [0,1]");
    total += a.mass;
  }
  require(std::abs(total - 1.0) <= kMassDriftTolerance, Errc::MassNotOne,
          "masses sum to " + std::to_string(total));
  if (total != 1.0) {
    for (Atom& a : atoms) a.mass /= total;
  }
  dist.atoms_ = std::move(atoms);
  return dist;
}

FiniteDistribution make_finite_distribution(std::vector<FiniteDistribution::Atom> atoms) {
  return FiniteDistribution::create(std::move(atoms));
}

std::optional<size_t> FiniteDistribution::find_atom(std::span<const double> x) const {
  if (x.size() != dim_) return std::nullopt;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    if (std::equal(x.begin(), x.end(), atoms_[i].feature.begin())) return i;
  }
  return std::nullopt;
}

Dataset sample_dataset(const FiniteDistribution& dist, size_t n, uint64_t seed) {
  require(n >= 1, Errc::InvalidArgument, "need n >= 1 samples");
  std::vector<double> cumulative;
  cumulative.reserve(dist.size());
  double acc = 0.0;
  for (const auto& a : dist.atoms()) {
    acc += a.mass;
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;

  Rng rng(seed);
  Dataset data(dist.dim(), Mode::Classification);
  data.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    const size_t atom = static_cast<size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    const size_t j = std::min(atom, dist.size() - 1);
    const double y = rng.bernoulli(dist.atom(j).eta) ? 1.0 : 0.0;
    data.push_back(dist.atom(j).feature, y);
  }
  return data;
}

Hypothesis Hypothesis::constant(int id, double value) {
  return Hypothesis(id, [value](std::span<const double>) { return value; });
}

Hypothesis Hypothesis::linear_clamped(int id, std::vector<double> weights) {
  return Hypothesis(id, [w = std::move(weights)](std::span<const double> x) {
    require(x.size() == w.size(), Errc::DimensionMismatch, "linear hypothesis dimension");
    double dot = 0.0;
    for (size_t i = 0; i < w.size(); ++i) dot += w[i] * x[i];
    return std::clamp(dot, 0.0, 1.0);
  });
}

Hypothesis Hypothesis::tabular(int id, const FiniteDistribution& support,
                               std::vector<double> values) {
  require(values.size() == support.size(), Errc::DimensionMismatch,
          "one value per support atom required");
  for (double v : values) {
    require(v >= 0.0 && v <= 1.0, Errc::InvalidArgument, "tabular prediction outside [0,1]");
  }
  struct Table {
    std::vector<std::vector<double>> keys;
    std::vector<double> values;
  };
  auto table = std::make_shared<Table>();
  table->values = std::move(values);
  table->keys.reserve(support.size());
  for (const auto& a : support.atoms()) table->keys.push_back(a.feature);
  return Hypothesis(id, [table](std::span<const double> x) {
    for (size_t i = 0; i < table->keys.size(); ++i) {
      const auto& key = table->keys[i];
      if (key.size() == x.size() && std::equal(x.begin(), x.end(), key.begin())) {
        return table->values[i];
      }
    }
    raise(Errc::HypothesisUndefinedOnSupport, "feature is not a support atom");
  });
}

MarginalInfo::MarginalInfo(double p, Provenance provenance) : p_(p), provenance_(provenance) {
  require(p >= 0.0 && p <= 1.0, Errc::InvalidArgument, "label marginal outside [0,1]");
}

void MarginalInfo::set_mean_prediction(int hypothesis_id, double value) {
  require(value >= 0.0 && value <= 1.0, Errc::InvalidArgument, "mean prediction outside [0,1]");
  mean_predictions_[hypothesis_id] = value;
}

double MarginalInfo::mean_prediction(int hypothesis_id) const {
  const auto it = mean_predictions_.find(hypothesis_id);
  require(it != mean_predictions_.end(), Errc::MissingMarginal,
          "no mean prediction stored for hypothesis " + std::to_string(hypothesis_id));
  return it->second;
}

}  // namespace llp
