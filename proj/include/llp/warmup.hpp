#pragma once

#include "llp/bagging.hpp"
#include "llp/types.hpp"

namespace llp {

// Two-hypothesis discrimination from bagged data. The decision statistics
// compare observed positive counts per bag with the counts each hypothesis
// predicts; which statistic drives the decision depends on the size of the
// prediction bias delta = E[h1(x) - h2(x)] relative to the separation
// beta = E[(h1(x) - h2(x))^2].
class WarmupInput {
 public:
  // Validates beta in (0, 1], |delta| <= 1 and delta^2 <= beta.
  WarmupInput(const BaggedSample& bags, const Hypothesis& h1, const Hypothesis& h2, double delta,
              double beta);

  const BaggedSample& bags() const { return *bags_; }
  const Hypothesis& h1() const { return *h1_; }
  const Hypothesis& h2() const { return *h2_; }
  double delta() const { return delta_; }
  double beta() const { return beta_; }

 private:
  const BaggedSample* bags_;
  const Hypothesis* h1_;
  const Hypothesis* h2_;
  double delta_;
  double beta_;
};

// sum_j (k alpha_j - sum_i h(x_{j,i})). Zero for a perfect predictor.
double stat_A(const Hypothesis& h, const BaggedSample& bags);

// Pairwise agreement statistic: with E_{j,s} = sum_i h_s(x_{j,i}) and
// mu_j = (E_{j,1} + E_{j,2}) / 2,
//   Q = sum_j [ {E_{j,1} <= E_{j,2}} (k alpha_j - mu_j)
//             + {E_{j,1} >  E_{j,2}} (mu_j - k alpha_j) ].
// Ties E_{j,1} = E_{j,2} take the first branch.
double stat_Q(const Hypothesis& h1, const Hypothesis& h2, const BaggedSample& bags);

// Decision rule:
//   if |delta| >= sqrt(beta / (2k)): h1 when |A1| < |A2|, else h2;
//   otherwise:                       h2 when Q >= 0, h1 when Q < 0.
// Returns the id of the chosen hypothesis.
int select_two(const WarmupInput& input);

struct DeltaBetaEstimate {
  double delta = 0.0;
  double beta = 0.0;
};

// Unlabeled plug-in estimates of delta and beta: sample means of h1 - h2 and
// (h1 - h2)^2 over all bag features. Opt-in; select_two itself always uses
// caller-supplied values.
DeltaBetaEstimate estimate_delta_beta(const BaggedSample& bags, const Hypothesis& h1,
                                      const Hypothesis& h2);

}  // namespace llp
