#include "llp/bagging.hpp"

#include <cmath>

#include "llp/rng.hpp"

namespace llp {

BaggedSample::BaggedSample(size_t k, size_t dim, Mode mode) : k_(k), dim_(dim), mode_(mode) {
  require(k >= 1, Errc::InvalidArgument, "bag size must be >= 1");
  require(dim >= 1, Errc::InvalidArgument, "feature dimension must be >= 1");
}

void BaggedSample::append_bag(std::span<const double> features, double alpha) {
  require(features.size() == k_ * dim_, Errc::DimensionMismatch,
          "bag must hold exactly k feature vectors");
  if (mode_ == Mode::Classification) {
    require(alpha >= 0.0 && alpha <= 1.0, Errc::InvalidArgument, "alpha outside [0,1]");
    const double count = alpha * static_cast<double>(k_);
    require(std::abs(count - std::round(count)) <= kAlphaCountTolerance, Errc::InvalidArgument,
            "alpha * k is not an integer positive count");
  }
  features_.insert(features_.end(), features.begin(), features.end());
  alphas_.push_back(alpha);
}

BaggedSample BaggedSample::slice(size_t first, size_t count) const {
  require(first + count <= bag_count(), Errc::InvalidArgument, "slice out of range");
  BaggedSample out(k_, dim_, mode_);
  for (size_t j = first; j < first + count; ++j) {
    out.append_bag({features_.data() + j * k_ * dim_, k_ * dim_}, alphas_[j]);
  }
  return out;
}

BaggedSample partition_into_bags(const Dataset& data, size_t k, uint64_t seed) {
  require(k >= 1, Errc::InvalidArgument, "bag size must be >= 1");
  require(data.size() >= k, Errc::BagSizeExceedsData, "fewer examples than one bag");

  Rng rng(seed);
  const std::vector<size_t> order = rng.permutation(data.size());
  const size_t m = data.size() / k;

  BaggedSample sample(k, data.dim(), data.mode());
  std::vector<double> bag_features(k * data.dim());
  for (size_t j = 0; j < m; ++j) {
    double label_sum = 0.0;
    for (size_t i = 0; i < k; ++i) {
      const size_t idx = order[j * k + i];
      const auto x = data.feature(idx);
      std::copy(x.begin(), x.end(), bag_features.begin() + i * data.dim());
      label_sum += data.label(idx);
    }
    sample.append_bag(bag_features, label_sum / static_cast<double>(k));
  }
  return sample;
}

std::vector<std::vector<size_t>> batch_bags(const BaggedSample& sample,
                                            size_t examples_per_batch) {
  require(examples_per_batch >= sample.k(), Errc::BatchSmallerThanBag,
          "batch must hold at least one bag");
  const size_t bags_per_batch = examples_per_batch / sample.k();
  std::vector<std::vector<size_t>> batches;
  for (size_t start = 0; start < sample.bag_count(); start += bags_per_batch) {
    const size_t end = std::min(start + bags_per_batch, sample.bag_count());
    std::vector<size_t> batch;
    batch.reserve(end - start);
    for (size_t j = start; j < end; ++j) batch.push_back(j);
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace llp
