#include "llp/oracles.hpp"

#include <bit>
#include <cmath>
#include <future>

namespace llp {

namespace {

struct ChunkMoments {
  double mean = 0.0;
  double second = 0.0;
};

// Exact moments over the feature tuples [first, last) x all 2^k label
// vectors. Feature tuples are decoded from a flat index in base s.
ChunkMoments enumerate_chunk(const FiniteDistribution& dist, size_t k,
                             const BagFunctional& value, uint64_t first, uint64_t last) {
  const size_t s = dist.size();
  const size_t dim = dist.dim();
  const uint64_t label_count = uint64_t{1} << k;

  std::vector<size_t> tuple(k);
  std::vector<double> features(k * dim);
  ChunkMoments out;

  for (uint64_t t = first; t < last; ++t) {
    uint64_t rem = t;
    double px = 1.0;
    for (size_t i = 0; i < k; ++i) {
      tuple[i] = static_cast<size_t>(rem % s);
      rem /= s;
      const auto& atom = dist.atom(tuple[i]);
      px *= atom.mass;
      std::copy(atom.feature.begin(), atom.feature.end(), features.begin() + i * dim);
    }
    if (px == 0.0) continue;

    for (uint64_t labels = 0; labels < label_count; ++labels) {
      double py = 1.0;
      for (size_t i = 0; i < k; ++i) {
        const double eta = dist.atom(tuple[i]).eta;
        py *= (labels >> i & 1) ? eta : (1.0 - eta);
      }
      if (py == 0.0) continue;
      const double alpha =
          static_cast<double>(std::popcount(labels)) / static_cast<double>(k);
      const BagView bag{k, dim, features.data(), alpha};
      const double v = value(bag);
      const double w = px * py;
      out.mean += w * v;
      out.second += w * v * v;
    }
  }
  return out;
}

}  // namespace

EnumeratedMoments enumerate_bag_moments(const FiniteDistribution& dist, size_t k,
                                        const BagFunctional& value, size_t threads) {
  require(k >= 1, Errc::InvalidArgument, "bag size must be >= 1");
  require(k < 63, Errc::EnumerationTooLarge, "bag size too large to enumerate");
  const double terms =
      std::pow(static_cast<double>(dist.size()), static_cast<double>(k)) *
      std::pow(2.0, static_cast<double>(k));
  require(terms <= kEnumerationGuard, Errc::EnumerationTooLarge,
          "enumeration would need " + std::to_string(terms) + " terms");

  uint64_t tuple_count = 1;
  for (size_t i = 0; i < k; ++i) tuple_count *= dist.size();

  // Fixed chunk size; partial sums are combined in chunk order, so the result
  // does not depend on the number of worker threads.
  const uint64_t chunk = 4096;
  const uint64_t n_chunks = (tuple_count + chunk - 1) / chunk;
  std::vector<ChunkMoments> partials(n_chunks);

  if (threads <= 1 || n_chunks == 1) {
    for (uint64_t c = 0; c < n_chunks; ++c) {
      partials[c] = enumerate_chunk(dist, k, value, c * chunk,
                                    std::min(tuple_count, (c + 1) * chunk));
    }
  } else {
    std::vector<std::future<void>> workers;
    std::atomic<uint64_t> next{0};
    for (size_t t = 0; t < threads; ++t) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
          partials[c] = enumerate_chunk(dist, k, value, c * chunk,
                                        std::min(tuple_count, (c + 1) * chunk));
        }
      }));
    }
    for (auto& w : workers) w.get();
  }

  EnumeratedMoments total;
  for (const ChunkMoments& p : partials) {
    total.mean += p.mean;
    total.second_moment += p.second;
  }
  return total;
}

double enumerate_bag_expectation(const FiniteDistribution& dist, size_t k, const Hypothesis& h,
                                 const LossKind& kind, const MarginalInfo& info, size_t threads) {
  const auto value = [&](const BagView& bag) { return eval_bag_loss(kind, h, bag, &info).value; };
  return enumerate_bag_moments(dist, k, value, threads).mean;
}

double enumerate_bag_variance(const FiniteDistribution& dist, size_t k, const Hypothesis& h,
                              const LossKind& kind, const MarginalInfo& info, size_t threads) {
  const auto value = [&](const BagView& bag) { return eval_bag_loss(kind, h, bag, &info).value; };
  const EnumeratedMoments m = enumerate_bag_moments(dist, k, value, threads);
  return m.second_moment - m.mean * m.mean;
}

double StreamingMoments::mean() const {
  require(count_ >= 1, Errc::InsufficientData, "mean needs at least one value");
  return mean_;
}

double StreamingMoments::variance() const {
  require(count_ >= 2, Errc::InsufficientData, "variance needs at least two values");
  return m2_ / static_cast<double>(count_ - 1);
}

VarianceSummary streaming_variance(std::span<const double> values) {
  StreamingMoments acc;
  for (double v : values) acc.add(v);
  return {acc.mean(), acc.variance(), acc.count()};
}

}  // namespace llp
