#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llp/erm.hpp"
#include "llp/sgd.hpp"
#include "llp/types.hpp"
#include "llp/warmup.hpp"

namespace llp::bench {

// One measurement. Rows are sorted before emission and every field is a pure
// function of (experiment, config, master seed).
struct ResultRow {
  std::string experiment;
  std::string loss;
  size_t k = 0;
  std::string statistic;
  double value = 0.0;
  double stderr_ = 0.0;
  uint64_t seed = 0;
  size_t repetitions = 0;

  bool operator==(const ResultRow&) const = default;
};

// CSV with the fixed header experiment,loss,k,statistic,value,stderr,seed,
// repetitions; floats rendered with 17 significant digits (round-trip exact).
std::string to_csv(std::vector<ResultRow> rows);
std::vector<ResultRow> parse_csv(const std::string& text);
std::string format_double(double v);

void sort_rows(std::vector<ResultRow>& rows);

// ---------------------------------------------------------------------------
// Variance experiment: x uniform on a grid_points-point grid of [0,1],
// y ~ Bernoulli(x^2), evaluated model hhat(x) = x. Per bag size k, each
// configured estimator produces estimates of E[(y - hhat(x))^2] using the
// exact label marginal and a leave-one-bag-out mean prediction computed per
// batch of batch_examples examples; the emitted statistic is the unbiased
// empirical variance of those estimates. ours_*, li and vanilla_sq are
// bag-level estimators (one estimate per bag); easyllp_sq is EasyLLP's
// per-example weighted square loss (one estimate per example), which is where
// its variance growth in k lives. Batches left with a single bag cannot form
// a leave-one-bag-out estimate and are dropped.
// ---------------------------------------------------------------------------

enum class VarianceLoss { OursUnclipped, OursClipped, Li, EasyLlpSq, VanillaSq };

const char* variance_loss_label(VarianceLoss loss);
std::optional<VarianceLoss> parse_variance_loss(const std::string& label);

struct VarianceExperimentConfig {
  size_t n = size_t{1} << 20;
  std::vector<size_t> bag_sizes = {2, 4, 8, 16, 32, 64, 128, 256};
  size_t batch_examples = 1024;
  size_t grid_points = 1024;
  uint64_t seed = 1;
  std::vector<VarianceLoss> losses = {VarianceLoss::OursUnclipped, VarianceLoss::Li,
                                      VarianceLoss::EasyLlpSq};
  double theta = 0.1;  // only used by ours_clipped
  size_t threads = 1;
};

std::vector<ResultRow> run_variance_experiment(const VarianceExperimentConfig& config);

// The grid law behind the experiment: atoms x_i = i/(g-1), mass 1/g,
// eta(x) = x^2.
FiniteDistribution make_grid_squared_distribution(size_t grid_points);

// ---------------------------------------------------------------------------
// Warmup sweep: two-hypothesis recovery frequency on the binary-feature
// construction parameterized by (beta, delta). Cells are (k, n) pairs; each
// repetition draws the true hypothesis uniformly, samples n examples from its
// law and checks whether select_two recovers it.
// ---------------------------------------------------------------------------

struct TwoFunctionInstance {
  FiniteDistribution dist_h1_true;
  FiniteDistribution dist_h2_true;
  Hypothesis h1;
  Hypothesis h2;
  double beta = 0.0;
  double delta = 0.0;
};

// X = {0, 1} with mass 1/2 each; h1, h2 built so that E[h1 - h2] = delta and
// E[(h1 - h2)^2] = beta. delta = 0 reduces to the symmetric construction with
// eta(x) = 1/2 +- sqrt(beta)/2.
TwoFunctionInstance make_two_function_instance(double beta, double delta);

struct WarmupSweepConfig {
  double beta = 0.25;
  double delta = 0.0;
  std::vector<size_t> ks = {128};
  std::vector<size_t> n_grid = {8192, 16384, 32768};
  size_t reps = 200;
  uint64_t seed = 1;
  size_t threads = 1;
  // Sample-complexity guard k >= 2 / (Phi(-1)^2 beta) from the analysis of
  // the agreement statistic. Sweeps reject violating cells unless disabled.
  bool enforce_guard = true;
};

// 2 / (Phi(-1)^2 beta), with Phi the standard normal CDF.
double warmup_min_bag_size(double beta);

std::vector<ResultRow> run_warmup_sweep(const WarmupSweepConfig& config);

// ---------------------------------------------------------------------------
// ERM sweep: realizable 8-hypothesis class on three atoms, failure rate
// (regret >= beta) per (k, m, marginal mode) cell plus the per-m agreement
// rate between Exact and SplitSample on the same samples.
// ---------------------------------------------------------------------------

struct ErmFixture {
  FiniteDistribution base;  // eta overwritten per repetition
  std::vector<Hypothesis> hypotheses;
  double separation = 0.0;  // min pairwise E[(h_i - h_j)^2]
};

// Three equally likely atoms; the 8 hypotheses take values low/high = a, 1-a
// over the atoms in all sign patterns, so the minimum pairwise separation is
// (1-2a)^2 / 3. The distribution with eta = h_b is realizable for every b.
ErmFixture make_erm_fixture(double low_value = 0.05);

FiniteDistribution erm_fixture_distribution(const ErmFixture& fixture, size_t true_index);

struct ErmSweepConfig {
  double beta = 0.25;
  std::vector<size_t> ks = {4, 16};
  std::vector<size_t> m_grid = {6, 12, 24};
  size_t seeds = 100;
  uint64_t seed = 1;
  std::optional<double> theta;  // default beta / (16 k^2)
  size_t m2 = 0;                // 0 -> ceil(m/2)
  size_t threads = 1;
};

std::vector<ResultRow> run_erm_sweep(const ErmSweepConfig& config);

// ---------------------------------------------------------------------------
// SGD sweep: realizable 1-d regression fixture y = w* x on a symmetric
// six-atom design; median excess risk and skip rate per m cell.
// ---------------------------------------------------------------------------

struct SgdFixture {
  RegressionDesign design;
  std::vector<double> w_star;
  double rho_w = 1.0;
  double rho_x = 1.0;
  double rho_y = 0.5;
};

SgdFixture make_sgd_fixture();

struct SgdSweepConfig {
  size_t k = 2;
  std::vector<size_t> m_grid = {1000, 2000, 4000};
  size_t reps = 20;
  double l_star = 0.0;
  std::optional<double> eta_override;
  std::optional<double> theta_override;
  uint64_t seed = 1;
  size_t threads = 1;
};

std::vector<ResultRow> run_sgd_sweep(const SgdSweepConfig& config);

// ---------------------------------------------------------------------------
// JSON config round-trip and file emission. Config JSON uses the field names
// of the structs above; parsing rejects unknown keys except the snapshot
// additions ("experiment", "artifact_version"). Experiment names: "variance",
// "warmup", "erm", "sgd".
// ---------------------------------------------------------------------------

std::string variance_config_to_json(const VarianceExperimentConfig& config);
std::string warmup_config_to_json(const WarmupSweepConfig& config);
std::string erm_config_to_json(const ErmSweepConfig& config);
std::string sgd_config_to_json(const SgdSweepConfig& config);

VarianceExperimentConfig variance_config_from_json(const std::string& json_text);
WarmupSweepConfig warmup_config_from_json(const std::string& json_text);
ErmSweepConfig erm_config_from_json(const std::string& json_text);
SgdSweepConfig sgd_config_from_json(const std::string& json_text);

// Runs the named experiment from a JSON config (empty string = defaults),
// writes the sorted CSV to csv_path and a config snapshot (full effective
// config + artifact version) next to it: <out>.config.json, with a trailing
// ".csv" stripped from <out> first. Returns the rows.
std::vector<ResultRow> run_experiment_to_files(const std::string& name,
                                               const std::string& config_json,
                                               const std::string& csv_path);

std::string snapshot_path_for(const std::string& csv_path);

}  // namespace llp::bench
