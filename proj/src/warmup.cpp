#include "llp/warmup.hpp"

#include <cmath>

namespace llp {

WarmupInput::WarmupInput(const BaggedSample& bags, const Hypothesis& h1, const Hypothesis& h2,
                         double delta, double beta)
    : bags_(&bags), h1_(&h1), h2_(&h2), delta_(delta), beta_(beta) {
  require(bags.bag_count() >= 1, Errc::EmptySample, "no bags");
  require(beta > 0.0 && beta <= 1.0, Errc::InvalidArgument, "beta must lie in (0,1]");
  require(std::abs(delta) <= 1.0, Errc::InvalidArgument, "|delta| must be <= 1");
  require(delta * delta <= beta + 1e-12, Errc::InvalidArgument,
          "delta^2 <= beta violated (Cauchy-Schwarz)");
}

double stat_A(const Hypothesis& h, const BaggedSample& bags) {
  require(bags.bag_count() >= 1, Errc::EmptySample, "no bags");
  double total = 0.0;
  for (size_t j = 0; j < bags.bag_count(); ++j) {
    double expected = 0.0;
    for (size_t i = 0; i < bags.k(); ++i) expected += h(bags.feature(j, i));
    total += static_cast<double>(bags.k()) * bags.alpha(j) - expected;
  }
  return total;
}

double stat_Q(const Hypothesis& h1, const Hypothesis& h2, const BaggedSample& bags) {
  require(bags.bag_count() >= 1, Errc::EmptySample, "no bags");
  double total = 0.0;
  for (size_t j = 0; j < bags.bag_count(); ++j) {
    double e1 = 0.0;
    double e2 = 0.0;
    for (size_t i = 0; i < bags.k(); ++i) {
      const auto x = bags.feature(j, i);
      e1 += h1(x);
      e2 += h2(x);
    }
    const double mu = 0.5 * (e1 + e2);
    const double count = static_cast<double>(bags.k()) * bags.alpha(j);
    total += (e1 <= e2) ? (count - mu) : (mu - count);
  }
  return total;
}

int select_two(const WarmupInput& input) {
  const double cutoff =
      std::sqrt(input.beta() / (2.0 * static_cast<double>(input.bags().k())));
  if (std::abs(input.delta()) >= cutoff) {
    const double a1 = std::abs(stat_A(input.h1(), input.bags()));
    const double a2 = std::abs(stat_A(input.h2(), input.bags()));
    return a1 < a2 ? input.h1().id() : input.h2().id();  // tie -> h2
  }
  const double q = stat_Q(input.h1(), input.h2(), input.bags());
  return q >= 0.0 ? input.h2().id() : input.h1().id();
}

DeltaBetaEstimate estimate_delta_beta(const BaggedSample& bags, const Hypothesis& h1,
                                      const Hypothesis& h2) {
  require(bags.bag_count() >= 1, Errc::EmptySample, "no bags");
  double sum_diff = 0.0;
  double sum_sq = 0.0;
  for (size_t j = 0; j < bags.bag_count(); ++j) {
    for (size_t i = 0; i < bags.k(); ++i) {
      const auto x = bags.feature(j, i);
      const double d = h1(x) - h2(x);
      sum_diff += d;
      sum_sq += d * d;
    }
  }
  const double n = static_cast<double>(bags.example_count());
  return {sum_diff / n, sum_sq / n};
}

}  // namespace llp
