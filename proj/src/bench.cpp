#include "llp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "llp/marginals.hpp"
#include "llp/oracles.hpp"
#include "llp/rng.hpp"
#include "llp/version.hpp"
#include "nlohmann/json.hpp"

namespace llp::bench {

using nlohmann::json;

namespace {

// Runs cell_fn(0..n_cells) over a small worker pool. Every cell owns its
// output slot and derives its own generators, so the result set is identical
// for any thread count; the first exception is rethrown on the caller.
template <typename Fn>
void run_cells(size_t n_cells, size_t threads, const Fn& cell_fn) {
  if (threads <= 1 || n_cells <= 1) {
    for (size_t i = 0; i < n_cells; ++i) cell_fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const size_t workers = std::min(threads, n_cells);
  for (size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n_cells; i = next.fetch_add(1)) {
        try {
          cell_fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double binomial_stderr(double rate, size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(rate * (1.0 - rate), 0.0) / static_cast<double>(n));
}

// Normal-approximation standard error of a sample variance; diagnostic only.
double variance_stderr(double variance, size_t n) {
  if (n < 2) return 0.0;
  return variance * std::sqrt(2.0 / static_cast<double>(n - 1));
}

double median(std::vector<double> values) {
  require(!values.empty(), Errc::InsufficientData, "median of empty set");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string cell_stat(const std::string& name, size_t m, const char* extra = nullptr) {
  std::string s = name + "@m=" + std::to_string(m);
  if (extra != nullptr) s += std::string(";mode=") + extra;
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.loss, a.k, a.statistic, a.seed) <
           std::tie(b.experiment, b.loss, b.k, b.statistic, b.seed);
  });
}

static const char* kCsvHeader = "experiment,loss,k,statistic,value,stderr,seed,repetitions";

std::string to_csv(std::vector<ResultRow> rows) {
  sort_rows(rows);
  std::string out = kCsvHeader;
  out += '\n';
  for (const ResultRow& r : rows) {
    require(r.experiment.find(',') == std::string::npos &&
                r.loss.find(',') == std::string::npos &&
                r.statistic.find(',') == std::string::npos,
            Errc::InvalidArgument, "CSV fields must not contain commas");
    out += r.experiment;
    out += ',';
    out += r.loss;
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += r.statistic;
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += format_double(r.stderr_);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.repetitions);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::InvalidArgument, "empty CSV");
  require(line == kCsvHeader, Errc::InvalidArgument, "unexpected CSV header: " + line);

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    require(fields.size() == 8, Errc::InvalidArgument, "CSV row with wrong field count");
    ResultRow r;
    r.experiment = fields[0];
    r.loss = fields[1];
    r.k = std::stoull(fields[2]);
    r.statistic = fields[3];
    r.value = std::stod(fields[4]);
    r.stderr_ = std::stod(fields[5]);
    r.seed = std::stoull(fields[6]);
    r.repetitions = std::stoull(fields[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Variance experiment
// ---------------------------------------------------------------------------

const char* variance_loss_label(VarianceLoss loss) {
  switch (loss) {
    case VarianceLoss::OursUnclipped: return "ours_unclipped";
    case VarianceLoss::OursClipped: return "ours_clipped";
    case VarianceLoss::Li: return "li";
    case VarianceLoss::EasyLlpSq: return "easyllp_sq";
    case VarianceLoss::VanillaSq: return "vanilla_sq";
  }
  return "unknown";
}

std::optional<VarianceLoss> parse_variance_loss(const std::string& label) {
  if (label == "ours_unclipped") return VarianceLoss::OursUnclipped;
  if (label == "ours_clipped") return VarianceLoss::OursClipped;
  if (label == "li") return VarianceLoss::Li;
  if (label == "easyllp_sq") return VarianceLoss::EasyLlpSq;
  if (label == "vanilla_sq") return VarianceLoss::VanillaSq;
  return std::nullopt;
}

FiniteDistribution make_grid_squared_distribution(size_t grid_points) {
  require(grid_points >= 2, Errc::InvalidArgument, "need at least two grid points");
  std::vector<FiniteDistribution::Atom> atoms;
  atoms.reserve(grid_points);
  const double mass = 1.0 / static_cast<double>(grid_points);
  for (size_t i = 0; i < grid_points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    atoms.push_back({{x}, mass, x * x});
  }
  return FiniteDistribution::create(std::move(atoms));
}

std::vector<ResultRow> run_variance_experiment(const VarianceExperimentConfig& config) {
  require(!config.bag_sizes.empty(), Errc::InvalidArgument, "no bag sizes");
  require(!config.losses.empty(), Errc::InvalidArgument, "no losses");
  for (size_t k : config.bag_sizes) {
    require(k >= 1 && k <= config.batch_examples, Errc::BatchSmallerThanBag,
            "bag size " + std::to_string(k) + " exceeds the batch");
  }

  const FiniteDistribution dist = make_grid_squared_distribution(config.grid_points);
  const double p = exact_label_marginal(dist);
  const Hypothesis hhat = Hypothesis::linear_clamped(0, {1.0});

  std::vector<std::vector<ResultRow>> cell_rows(config.bag_sizes.size());
  run_cells(config.bag_sizes.size(), config.threads, [&](size_t cell) {
    const size_t k = config.bag_sizes[cell];
    const uint64_t cell_seed = derive_seed(config.seed, cell);
    const Dataset data = sample_dataset(dist, config.n, derive_seed(cell_seed, 0));
    const BaggedSample bags = partition_into_bags(data, k, derive_seed(cell_seed, 1));
    const auto batches = batch_bags(bags, config.batch_examples);

    const size_t m = bags.bag_count();
    std::vector<double> h_values(m * k);
    std::vector<double> bag_sums(m, 0.0);
    for (size_t j = 0; j < m; ++j) {
      double sum = 0.0;
      for (size_t i = 0; i < k; ++i) {
        const double v = hhat(bags.feature(j, i));
        h_values[j * k + i] = v;
        sum += v;
      }
      bag_sums[j] = sum;
    }

    std::vector<StreamingMoments> stats(config.losses.size());
    for (const auto& batch : batches) {
      if (batch.size() < 2) continue;  // no leave-one-bag-out estimate possible
      double batch_sum = 0.0;
      for (size_t j : batch) batch_sum += bag_sums[j];
      const double loo_denom = static_cast<double>((batch.size() - 1) * k);

      for (size_t j : batch) {
        const double alpha = bags.alpha(j);
        const double mean_pred = (batch_sum - bag_sums[j]) / loo_denom;
        const std::span<const double> values(h_values.data() + j * k, k);
        for (size_t li = 0; li < config.losses.size(); ++li) {
          switch (config.losses[li]) {
            case VarianceLoss::OursUnclipped:
              stats[li].add(ours_unclipped_from_values(values, alpha, p, mean_pred).value);
              break;
            case VarianceLoss::OursClipped:
              stats[li].add(ours_clipped_from_values(values, alpha, p, mean_pred, config.theta,
                                                     ThresholdMode::Known)
                                .value);
              break;
            case VarianceLoss::Li:
              stats[li].add(li_loss_from_values(values, alpha, p, mean_pred).value);
              break;
            case VarianceLoss::EasyLlpSq: {
              // EasyLLP is a per-example estimator; its variance in k lives at
              // example granularity (bag-averaging cancels the growth when
              // E[(1-h)^2] = E[h^2], as for hhat(x) = x on [0,1]).
              const auto [w1, w0] = easyllp_weights(k, alpha, p);
              for (double hv : values) {
                stats[li].add(w1 * (1.0 - hv) * (1.0 - hv) + w0 * hv * hv);
              }
              break;
            }
            case VarianceLoss::VanillaSq:
              stats[li].add(vanilla_sq_from_values(values, alpha).value);
              break;
          }
        }
      }
    }

    for (size_t li = 0; li < config.losses.size(); ++li) {
      const double var = stats[li].variance();
      cell_rows[cell].push_back({"variance", variance_loss_label(config.losses[li]), k,
                                 "variance", var, variance_stderr(var, stats[li].count()),
                                 config.seed, stats[li].count()});
    }
  });

  std::vector<ResultRow> rows;
  for (auto& cr : cell_rows) rows.insert(rows.end(), cr.begin(), cr.end());
  sort_rows(rows);
  return rows;
}

// ---------------------------------------------------------------------------
// Warmup sweep
// ---------------------------------------------------------------------------

TwoFunctionInstance make_two_function_instance(double beta, double delta) {
  require(beta > 0.0 && beta <= 1.0, Errc::InvalidArgument, "beta must lie in (0,1]");
  require(delta * delta <= beta, Errc::InvalidArgument, "need delta^2 <= beta");
  const double spread = std::sqrt(beta - delta * delta);
  const double d0 = delta - spread;
  const double d1 = delta + spread;
  require(std::abs(d0) <= 1.0 && std::abs(d1) <= 1.0, Errc::InvalidArgument,
          "construction leaves [0,1]; reduce beta or delta");

  const std::vector<double> h1v = {0.5 + d0 / 2.0, 0.5 + d1 / 2.0};
  const std::vector<double> h2v = {0.5 - d0 / 2.0, 0.5 - d1 / 2.0};
  auto dist_for = [&](const std::vector<double>& eta) {
    return FiniteDistribution::create({{{0.0}, 0.5, eta[0]}, {{1.0}, 0.5, eta[1]}});
  };
  FiniteDistribution d_h1 = dist_for(h1v);
  TwoFunctionInstance inst{dist_for(h1v), dist_for(h2v),
                           Hypothesis::tabular(1, d_h1, h1v), Hypothesis::tabular(2, d_h1, h2v),
                           beta, delta};
  return inst;
}

double warmup_min_bag_size(double beta) {
  require(beta > 0.0, Errc::InvalidArgument, "beta must be positive");
  const double phi_m1 = 0.5 * std::erfc(1.0 / std::sqrt(2.0));  // standard normal CDF at -1
  return 2.0 / (phi_m1 * phi_m1 * beta);
}

std::vector<ResultRow> run_warmup_sweep(const WarmupSweepConfig& config) {
  require(!config.ks.empty() && !config.n_grid.empty(), Errc::InvalidArgument, "empty sweep");
  require(config.reps >= 1, Errc::InvalidArgument, "need at least one repetition");
  const TwoFunctionInstance inst = make_two_function_instance(config.beta, config.delta);
  if (config.enforce_guard) {
    const double min_k = warmup_min_bag_size(config.beta);
    for (size_t k : config.ks) {
      require(static_cast<double>(k) >= min_k, Errc::PreconditionViolated,
              "bag size " + std::to_string(k) + " below the guard " + std::to_string(min_k) +
                  " for beta=" + std::to_string(config.beta));
    }
  }

  struct Cell {
    size_t k;
    size_t n;
  };
  std::vector<Cell> cells;
  for (size_t k : config.ks) {
    for (size_t n : config.n_grid) cells.push_back({k, n});
  }

  std::vector<ResultRow> rows(cells.size());
  run_cells(cells.size(), config.threads, [&](size_t ci) {
    const auto [k, n] = cells[ci];
    const size_t m = n / k;
    require(m >= 1, Errc::InvalidArgument, "n smaller than one bag");
    const uint64_t cell_seed = derive_seed(config.seed, ci);

    size_t successes = 0;
    for (size_t rep = 0; rep < config.reps; ++rep) {
      Rng rep_rng(derive_seed(cell_seed, rep));
      const bool h1_true = rep_rng.bernoulli(0.5);
      const FiniteDistribution& law = h1_true ? inst.dist_h1_true : inst.dist_h2_true;
      const Dataset data = sample_dataset(law, m * k, derive_seed(cell_seed, rep * 2 + 1000003));
      const BaggedSample bags =
          partition_into_bags(data, k, derive_seed(cell_seed, rep * 2 + 1000004));
      const int chosen =
          select_two(WarmupInput(bags, inst.h1, inst.h2, config.delta, config.beta));
      successes += (chosen == (h1_true ? inst.h1.id() : inst.h2.id())) ? 1 : 0;
    }
    const double rate = static_cast<double>(successes) / static_cast<double>(config.reps);
    rows[ci] = {"warmup", "none", k, "success_rate@n=" + std::to_string(n), rate,
                binomial_stderr(rate, config.reps), config.seed, config.reps};
  });
  sort_rows(rows);
  return rows;
}

// ---------------------------------------------------------------------------
// ERM sweep
// ---------------------------------------------------------------------------

ErmFixture make_erm_fixture(double low_value) {
  require(low_value > 0.0 && low_value < 0.5, Errc::InvalidArgument,
          "low value must lie in (0, 0.5)");
  std::vector<FiniteDistribution::Atom> atoms;
  for (size_t j = 0; j < 3; ++j) {
    atoms.push_back({{static_cast<double>(j)}, 1.0 / 3.0, 0.5});
  }
  ErmFixture fixture{FiniteDistribution::create(atoms), {}, 0.0};

  const double high = 1.0 - low_value;
  for (int b = 0; b < 8; ++b) {
    std::vector<double> values(3);
    for (int j = 0; j < 3; ++j) values[j] = ((b >> j) & 1) ? high : low_value;
    fixture.hypotheses.push_back(Hypothesis::tabular(b, fixture.base, values));
  }
  const double gap = high - low_value;
  fixture.separation = gap * gap / 3.0;  // one differing atom
  return fixture;
}

FiniteDistribution erm_fixture_distribution(const ErmFixture& fixture, size_t true_index) {
  require(true_index < fixture.hypotheses.size(), Errc::InvalidArgument, "bad hypothesis index");
  std::vector<FiniteDistribution::Atom> atoms;
  for (const auto& a : fixture.base.atoms()) {
    atoms.push_back({a.feature, a.mass, fixture.hypotheses[true_index](a.feature)});
  }
  return FiniteDistribution::create(std::move(atoms));
}

std::vector<ResultRow> run_erm_sweep(const ErmSweepConfig& config) {
  require(!config.ks.empty() && !config.m_grid.empty(), Errc::InvalidArgument, "empty sweep");
  require(config.seeds >= 1, Errc::InvalidArgument, "need at least one seed");
  for (size_t m : config.m_grid) {
    require(m >= 2, Errc::InvalidArgument, "need m >= 2 bags per cell");
  }
  const ErmFixture fixture = make_erm_fixture();
  require(fixture.separation >= config.beta, Errc::PreconditionViolated,
          "fixture separation " + std::to_string(fixture.separation) +
              " below target beta " + std::to_string(config.beta));

  struct Cell {
    size_t k;
    size_t m;
  };
  std::vector<Cell> cells;
  for (size_t k : config.ks) {
    for (size_t m : config.m_grid) cells.push_back({k, m});
  }

  std::vector<std::vector<ResultRow>> cell_rows(cells.size());
  run_cells(cells.size(), config.threads, [&](size_t ci) {
    const auto [k, m] = cells[ci];
    const double theta = config.theta.value_or(ErmConfig::default_theta(config.beta, k));
    const uint64_t cell_seed = derive_seed(config.seed, ci);

    size_t fail_exact = 0;
    size_t fail_split = 0;
    size_t agree = 0;
    for (size_t s = 0; s < config.seeds; ++s) {
      Rng rng(derive_seed(cell_seed, s));
      const size_t true_index = rng.uniform_index(fixture.hypotheses.size());
      const FiniteDistribution law = erm_fixture_distribution(fixture, true_index);
      const Dataset data = sample_dataset(law, m * k, derive_seed(cell_seed, s * 2 + 1));
      const BaggedSample bags = partition_into_bags(data, k, derive_seed(cell_seed, s * 2 + 2));

      ErmConfig exact_cfg;
      exact_cfg.theta = theta;
      exact_cfg.mode = ErmConfig::MarginalMode::Exact;
      exact_cfg.exact_info = exact_marginal_info(law, fixture.hypotheses);
      const ErmResult exact = erm_fit(bags, fixture.hypotheses, exact_cfg);

      ErmConfig split_cfg;
      split_cfg.theta = theta;
      split_cfg.mode = ErmConfig::MarginalMode::SplitSample;
      split_cfg.m2 = config.m2;
      const ErmResult split = erm_fit(bags, fixture.hypotheses, split_cfg);

      fail_exact +=
          population_regret(law, fixture.hypotheses, exact.chosen) >= config.beta ? 1 : 0;
      fail_split +=
          population_regret(law, fixture.hypotheses, split.chosen) >= config.beta ? 1 : 0;
      agree += exact.chosen == split.chosen ? 1 : 0;
    }

    const double n = static_cast<double>(config.seeds);
    const double fe = static_cast<double>(fail_exact) / n;
    const double fs = static_cast<double>(fail_split) / n;
    const double ag = static_cast<double>(agree) / n;
    cell_rows[ci] = {
        {"erm", "ours_clipped", k, cell_stat("failure_rate", m, "exact"), fe,
         binomial_stderr(fe, config.seeds), config.seed, config.seeds},
        {"erm", "ours_clipped", k, cell_stat("failure_rate", m, "split"), fs,
         binomial_stderr(fs, config.seeds), config.seed, config.seeds},
        {"erm", "ours_clipped", k, cell_stat("agreement_rate", m), ag,
         binomial_stderr(ag, config.seeds), config.seed, config.seeds},
    };
  });

  std::vector<ResultRow> rows;
  for (auto& cr : cell_rows) rows.insert(rows.end(), cr.begin(), cr.end());
  sort_rows(rows);
  return rows;
}

// ---------------------------------------------------------------------------
// SGD sweep
// ---------------------------------------------------------------------------

SgdFixture make_sgd_fixture() {
  std::vector<RegressionDesign::Atom> atoms;
  for (double x : {-1.0, -0.6, -0.2, 0.2, 0.6, 1.0}) {
    atoms.push_back({{x}, 1.0 / 6.0, {{0.5 * x, 1.0}}});
  }
  return {RegressionDesign::create(std::move(atoms)), {0.5}, 1.0, 1.0, 0.5};
}

std::vector<ResultRow> run_sgd_sweep(const SgdSweepConfig& config) {
  require(!config.m_grid.empty(), Errc::InvalidArgument, "empty sweep");
  require(config.reps >= 1, Errc::InvalidArgument, "need at least one repetition");
  require(config.k >= 1, Errc::InvalidArgument, "bag size must be >= 1");
  const SgdFixture fixture = make_sgd_fixture();
  const double best_loss = population_linear_loss(fixture.design, fixture.w_star);

  std::vector<std::vector<ResultRow>> cell_rows(config.m_grid.size());
  run_cells(config.m_grid.size(), config.threads, [&](size_t ci) {
    const size_t m = config.m_grid[ci];
    const uint64_t cell_seed = derive_seed(config.seed, ci);

    SgdParams params;
    params.rho_w = fixture.rho_w;
    params.rho_x = fixture.rho_x;
    params.rho_y = fixture.rho_y;
    params.mu_x = fixture.design.mu_x();
    params.mu_y = fixture.design.mu_y();
    params.l_star = config.l_star;
    params.m = m;
    params.k = config.k;
    params.eta_override = config.eta_override;
    params.theta_override = config.theta_override;

    std::vector<double> excesses;
    excesses.reserve(config.reps);
    size_t skipped_total = 0;
    for (size_t rep = 0; rep < config.reps; ++rep) {
      const Dataset data =
          fixture.design.sample(m * config.k, derive_seed(cell_seed, rep * 2));
      const BaggedSample bags =
          partition_into_bags(data, config.k, derive_seed(cell_seed, rep * 2 + 1));
      const SgdTrace trace = sgd_train(bags, params);
      excesses.push_back(population_linear_loss(fixture.design, trace.final_average) -
                         best_loss);
      skipped_total += trace.skipped_bags;
    }

    const double med = median(excesses);
    const double skip_rate =
        static_cast<double>(skipped_total) / static_cast<double>(config.reps * m);
    cell_rows[ci] = {
        {"sgd", "ours_linear", config.k, cell_stat("median_excess_risk", m), med, 0.0,
         config.seed, config.reps},
        {"sgd", "ours_linear", config.k, cell_stat("skip_rate", m), skip_rate,
         binomial_stderr(skip_rate, config.reps * m), config.seed, config.reps},
    };
  });

  std::vector<ResultRow> rows;
  for (auto& cr : cell_rows) rows.insert(rows.end(), cr.begin(), cr.end());
  sort_rows(rows);
  return rows;
}

// ---------------------------------------------------------------------------
// JSON configs
// ---------------------------------------------------------------------------

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
  require(j.is_object(), Errc::InvalidArgument, "config JSON must be an object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key == "experiment" || key == "artifact_version") continue;  // snapshot fields
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    require(ok, Errc::InvalidArgument, "unknown config key: " + key);
  }
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text.empty() ? "{}" : text);
  } catch (const json::parse_error& e) {
    raise(Errc::InvalidArgument, std::string("config JSON parse error: ") + e.what());
  }
}

template <typename T>
void load(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

template <typename T>
void load_optional(const json& j, const char* key, std::optional<T>& into) {
  if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

}  // namespace

std::string variance_config_to_json(const VarianceExperimentConfig& c) {
  json j;
  j["n"] = c.n;
  j["bag_sizes"] = c.bag_sizes;
  j["batch_examples"] = c.batch_examples;
  j["grid_points"] = c.grid_points;
  j["seed"] = c.seed;
  std::vector<std::string> losses;
  for (VarianceLoss l : c.losses) losses.emplace_back(variance_loss_label(l));
  j["losses"] = losses;
  j["theta"] = c.theta;
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

VarianceExperimentConfig variance_config_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_keys(j, {"n", "bag_sizes", "batch_examples", "grid_points", "seed", "losses", "theta",
                 "threads"});
  VarianceExperimentConfig c;
  load(j, "n", c.n);
  load(j, "bag_sizes", c.bag_sizes);
  load(j, "batch_examples", c.batch_examples);
  load(j, "grid_points", c.grid_points);
  load(j, "seed", c.seed);
  load(j, "theta", c.theta);
  load(j, "threads", c.threads);
  if (j.contains("losses")) {
    c.losses.clear();
    for (const auto& label : j.at("losses")) {
      const auto parsed = parse_variance_loss(label.get<std::string>());
      require(parsed.has_value(), Errc::InvalidArgument,
              "unknown loss label: " + label.get<std::string>());
      c.losses.push_back(*parsed);
    }
  }
  return c;
}

std::string warmup_config_to_json(const WarmupSweepConfig& c) {
  json j;
  j["beta"] = c.beta;
  j["delta"] = c.delta;
  j["ks"] = c.ks;
  j["n_grid"] = c.n_grid;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["enforce_guard"] = c.enforce_guard;
  return j.dump(2) + "\n";
}

WarmupSweepConfig warmup_config_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_keys(j, {"beta", "delta", "ks", "n_grid", "reps", "seed", "threads", "enforce_guard"});
  WarmupSweepConfig c;
  load(j, "beta", c.beta);
  load(j, "delta", c.delta);
  load(j, "ks", c.ks);
  load(j, "n_grid", c.n_grid);
  load(j, "reps", c.reps);
  load(j, "seed", c.seed);
  load(j, "threads", c.threads);
  load(j, "enforce_guard", c.enforce_guard);
  return c;
}

std::string erm_config_to_json(const ErmSweepConfig& c) {
  json j;
  j["beta"] = c.beta;
  j["ks"] = c.ks;
  j["m_grid"] = c.m_grid;
  j["seeds"] = c.seeds;
  j["seed"] = c.seed;
  j["theta"] = c.theta.has_value() ? json(*c.theta) : json(nullptr);
  j["m2"] = c.m2;
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

ErmSweepConfig erm_config_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_keys(j, {"beta", "ks", "m_grid", "seeds", "seed", "theta", "m2", "threads"});
  ErmSweepConfig c;
  load(j, "beta", c.beta);
  load(j, "ks", c.ks);
  load(j, "m_grid", c.m_grid);
  load(j, "seeds", c.seeds);
  load(j, "seed", c.seed);
  load_optional(j, "theta", c.theta);
  load(j, "m2", c.m2);
  load(j, "threads", c.threads);
  return c;
}

std::string sgd_config_to_json(const SgdSweepConfig& c) {
  json j;
  j["k"] = c.k;
  j["m_grid"] = c.m_grid;
  j["reps"] = c.reps;
  j["l_star"] = c.l_star;
  j["eta_override"] = c.eta_override.has_value() ? json(*c.eta_override) : json(nullptr);
  j["theta_override"] = c.theta_override.has_value() ? json(*c.theta_override) : json(nullptr);
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

SgdSweepConfig sgd_config_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_keys(j, {"k", "m_grid", "reps", "l_star", "eta_override", "theta_override", "seed",
                 "threads"});
  SgdSweepConfig c;
  load(j, "k", c.k);
  load(j, "m_grid", c.m_grid);
  load(j, "reps", c.reps);
  load(j, "l_star", c.l_star);
  load_optional(j, "eta_override", c.eta_override);
  load_optional(j, "theta_override", c.theta_override);
  load(j, "seed", c.seed);
  load(j, "threads", c.threads);
  return c;
}

// ---------------------------------------------------------------------------
// File emission
// ---------------------------------------------------------------------------

std::string snapshot_path_for(const std::string& csv_path) {
  std::string stem = csv_path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") {
    stem = stem.substr(0, stem.size() - 4);
  }
  return stem + ".config.json";
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::Io, "cannot open " + path + " for writing");
  out << content;
  out.flush();
  require(out.good(), Errc::Io, "write failed for " + path);
}

std::string with_snapshot_fields(const std::string& config_json, const std::string& name) {
  json j = json::parse(config_json);
  j["experiment"] = name;
  j["artifact_version"] = kVersion;
  return j.dump(2) + "\n";
}

}  // namespace

std::vector<ResultRow> run_experiment_to_files(const std::string& name,
                                               const std::string& config_json,
                                               const std::string& csv_path) {
  std::vector<ResultRow> rows;
  std::string effective_config;
  if (name == "variance") {
    const auto config = variance_config_from_json(config_json);
    effective_config = variance_config_to_json(config);
    rows = run_variance_experiment(config);
  } else if (name == "warmup") {
    const auto config = warmup_config_from_json(config_json);
    effective_config = warmup_config_to_json(config);
    rows = run_warmup_sweep(config);
  } else if (name == "erm") {
    const auto config = erm_config_from_json(config_json);
    effective_config = erm_config_to_json(config);
    rows = run_erm_sweep(config);
  } else if (name == "sgd") {
    const auto config = sgd_config_from_json(config_json);
    effective_config = sgd_config_to_json(config);
    rows = run_sgd_sweep(config);
  } else {
    raise(Errc::InvalidArgument, "unknown experiment: " + name);
  }

  write_file(csv_path, to_csv(rows));
  write_file(snapshot_path_for(csv_path), with_snapshot_fields(effective_config, name));
  return rows;
}

}  // namespace llp::bench
