#include "llp.h"

#include <cstring>
#include <string>

#include "llp/bench.hpp"
#include "llp/erm.hpp"
#include "llp/losses.hpp"
#include "llp/marginals.hpp"
#include "llp/sgd.hpp"
#include "llp/types.hpp"
#include "llp/version.hpp"
#include "llp/warmup.hpp"

namespace {

thread_local std::string g_last_error;

llp_status status_for(llp::Errc code) {
  using llp::Errc;
  switch (code) {
    case Errc::MissingMarginal: return LLP_ERR_MISSING_MARGINAL;
    case Errc::PreconditionViolated: return LLP_ERR_PRECONDITION;
    case Errc::EnumerationTooLarge: return LLP_ERR_TOO_LARGE;
    case Errc::Io: return LLP_ERR_IO;
    default: return LLP_ERR_INVALID_ARGUMENT;
  }
}

template <typename Fn>
llp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LLP_OK;
  } catch (const llp::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LLP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LLP_ERR_INTERNAL;
  }
}

llp_status invalid(const char* message) {
  g_last_error = message;
  return LLP_ERR_INVALID_ARGUMENT;
}

llp::Hypothesis tabular_from_array(int id, const llp::FiniteDistribution& dist,
                                   const double* values) {
  return llp::Hypothesis::tabular(id, dist,
                                  std::vector<double>(values, values + dist.size()));
}

}  // namespace

struct llp_dist {
  llp::FiniteDistribution dist;
};

struct llp_bags {
  llp::BaggedSample bags;
};

extern "C" {

const char* llp_version(void) { return llp::kVersion; }

const char* llp_last_error(void) { return g_last_error.c_str(); }

llp_status llp_dist_create(size_t support, size_t dim, const double* features,
                           const double* masses, const double* etas, llp_dist** out) {
  if (out == nullptr) return invalid("out is NULL");
  *out = nullptr;
  if (features == nullptr || masses == nullptr || etas == nullptr) {
    return invalid("features/masses/etas must not be NULL");
  }
  return guarded([&] {
    std::vector<llp::FiniteDistribution::Atom> atoms;
    atoms.reserve(support);
    for (size_t i = 0; i < support; ++i) {
      atoms.push_back({std::vector<double>(features + i * dim, features + (i + 1) * dim),
                       masses[i], etas[i]});
    }
    *out = new llp_dist{llp::FiniteDistribution::create(std::move(atoms))};
  });
}

void llp_dist_free(llp_dist* dist) { delete dist; }

size_t llp_dist_support(const llp_dist* dist) { return dist == nullptr ? 0 : dist->dist.size(); }

size_t llp_dist_dim(const llp_dist* dist) { return dist == nullptr ? 0 : dist->dist.dim(); }

llp_status llp_dist_label_marginal(const llp_dist* dist, double* out) {
  if (dist == nullptr || out == nullptr) return invalid("dist/out must not be NULL");
  return guarded([&] { *out = llp::exact_label_marginal(dist->dist); });
}

llp_status llp_dist_prediction_mean(const llp_dist* dist, const double* h_values, double* out) {
  if (dist == nullptr || h_values == nullptr || out == nullptr) {
    return invalid("dist/h_values/out must not be NULL");
  }
  return guarded([&] {
    const auto h = tabular_from_array(0, dist->dist, h_values);
    *out = llp::exact_prediction_mean(dist->dist, h);
  });
}

llp_status llp_bags_sample(const llp_dist* dist, size_t n, size_t k, uint64_t seed,
                           llp_bags** out) {
  if (dist == nullptr || out == nullptr) return invalid("dist/out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const llp::Dataset data = llp::sample_dataset(dist->dist, n, llp::derive_seed(seed, 0));
    *out = new llp_bags{llp::partition_into_bags(data, k, llp::derive_seed(seed, 1))};
  });
}

void llp_bags_free(llp_bags* bags) { delete bags; }

size_t llp_bags_count(const llp_bags* bags) {
  return bags == nullptr ? 0 : bags->bags.bag_count();
}

size_t llp_bags_bag_size(const llp_bags* bags) { return bags == nullptr ? 0 : bags->bags.k(); }

llp_status llp_bags_alpha(const llp_bags* bags, size_t index, double* out) {
  if (bags == nullptr || out == nullptr) return invalid("bags/out must not be NULL");
  if (index >= bags->bags.bag_count()) return invalid("bag index out of range");
  *out = bags->bags.alpha(index);
  return LLP_OK;
}

llp_status llp_bag_loss(llp_loss_kind kind, size_t k, const double* h_values, double alpha,
                        double p, double mean_prediction, double theta, llp_threshold_mode mode,
                        double clamp_eps, double* value, int* clipped) {
  if (h_values == nullptr || value == nullptr) return invalid("h_values/value must not be NULL");
  if (k == 0) return invalid("k must be >= 1");
  const double eps = clamp_eps > 0.0 ? clamp_eps : llp::kDefaultClampEps;
  const std::span<const double> values(h_values, k);
  return guarded([&] {
    llp::BagLossValue result;
    switch (kind) {
      case LLP_LOSS_OURS_UNCLIPPED:
        result = llp::ours_unclipped_from_values(values, alpha, p, mean_prediction);
        break;
      case LLP_LOSS_OURS_CLIPPED:
        result = llp::ours_clipped_from_values(values, alpha, p, mean_prediction, theta,
                                               mode == LLP_THRESHOLD_ESTIMATED
                                                   ? llp::ThresholdMode::Estimated
                                                   : llp::ThresholdMode::Known);
        break;
      case LLP_LOSS_LI:
        result = llp::li_loss_from_values(values, alpha, p, mean_prediction);
        break;
      case LLP_LOSS_EASYLLP:
        result = llp::easyllp_loss_from_values(values, alpha, p, eps);
        break;
      case LLP_LOSS_VANILLA_SQ:
        result = llp::vanilla_sq_from_values(values, alpha);
        break;
      case LLP_LOSS_VANILLA_CE:
        result = llp::vanilla_ce_from_values(values, alpha, eps);
        break;
      default:
        llp::raise(llp::Errc::InvalidArgument, "unknown loss kind");
    }
    *value = result.value;
    if (clipped != nullptr) *clipped = result.clipped ? 1 : 0;
  });
}

llp_status llp_linear_bag_loss_grad(size_t dim, size_t k, const double* w,
                                    const double* bag_features, double alpha, const double* mu_x,
                                    double mu_y, double* value, double* grad) {
  if (w == nullptr || bag_features == nullptr || mu_x == nullptr || value == nullptr) {
    return invalid("w/bag_features/mu_x/value must not be NULL");
  }
  if (dim == 0 || k == 0) return invalid("dim and k must be >= 1");
  return guarded([&] {
    const llp::BagView bag{k, dim, bag_features, alpha};
    *value = llp::linear_bag_loss_grad_into({w, dim}, bag, {mu_x, dim},
                                            mu_y, grad ? std::span<double>(grad, dim)
                                                       : std::span<double>());
  });
}

llp_status llp_select_two(const llp_dist* dist, const llp_bags* bags, const double* h1_values,
                          const double* h2_values, double delta, double beta, int* chosen) {
  if (dist == nullptr || bags == nullptr || h1_values == nullptr || h2_values == nullptr ||
      chosen == nullptr) {
    return invalid("dist/bags/h values/chosen must not be NULL");
  }
  return guarded([&] {
    const auto h1 = tabular_from_array(1, dist->dist, h1_values);
    const auto h2 = tabular_from_array(2, dist->dist, h2_values);
    *chosen = llp::select_two(llp::WarmupInput(bags->bags, h1, h2, delta, beta));
  });
}

llp_status llp_erm_fit(const llp_dist* dist, const llp_bags* bags, const double* h_table,
                       size_t n_hypotheses, double theta, int use_split, size_t m2,
                       int* chosen_index) {
  if (dist == nullptr || bags == nullptr || h_table == nullptr || chosen_index == nullptr) {
    return invalid("dist/bags/h_table/chosen_index must not be NULL");
  }
  return guarded([&] {
    std::vector<llp::Hypothesis> hypotheses;
    hypotheses.reserve(n_hypotheses);
    for (size_t i = 0; i < n_hypotheses; ++i) {
      hypotheses.push_back(
          tabular_from_array(static_cast<int>(i), dist->dist, h_table + i * dist->dist.size()));
    }
    llp::ErmConfig config;
    config.theta = theta;
    if (use_split != 0) {
      config.mode = llp::ErmConfig::MarginalMode::SplitSample;
      config.m2 = m2;
    } else {
      config.mode = llp::ErmConfig::MarginalMode::Exact;
      config.exact_info = llp::exact_marginal_info(dist->dist, hypotheses);
    }
    *chosen_index = llp::erm_fit(bags->bags, hypotheses, config).chosen;
  });
}

llp_status llp_sgd_derive_constants(size_t k, size_t m, double rho_w, double rho_x, double rho_y,
                                    double l_star, double* theta, double* zeta, double* eta) {
  if (theta == nullptr || zeta == nullptr || eta == nullptr) {
    return invalid("theta/zeta/eta must not be NULL");
  }
  return guarded([&] {
    llp::SgdParams params;
    params.rho_w = rho_w;
    params.rho_x = rho_x;
    params.rho_y = rho_y;
    params.l_star = l_star;
    params.m = m;
    params.k = k;
    params.mu_x = {0.0};
    const llp::SgdConstants c = llp::derive_constants(params);
    *theta = c.theta;
    *zeta = c.zeta;
    *eta = c.eta;
  });
}

llp_status llp_sgd_train(const llp_bags* bags, size_t dim, const double* mu_x, double mu_y,
                         double rho_w, double rho_x, double rho_y, double l_star,
                         int has_eta_override, double eta_override, int has_theta_override,
                         double theta_override, double* w_out, size_t* skipped) {
  if (bags == nullptr || mu_x == nullptr || w_out == nullptr) {
    return invalid("bags/mu_x/w_out must not be NULL");
  }
  return guarded([&] {
    llp::SgdParams params;
    params.rho_w = rho_w;
    params.rho_x = rho_x;
    params.rho_y = rho_y;
    params.mu_x.assign(mu_x, mu_x + dim);
    params.mu_y = mu_y;
    params.l_star = l_star;
    params.m = bags->bags.bag_count();
    params.k = bags->bags.k();
    if (has_eta_override != 0) params.eta_override = eta_override;
    if (has_theta_override != 0) params.theta_override = theta_override;
    const llp::SgdTrace trace = llp::sgd_train(bags->bags, params);
    std::memcpy(w_out, trace.final_average.data(), dim * sizeof(double));
    if (skipped != nullptr) *skipped = trace.skipped_bags;
  });
}

llp_status llp_run_experiment(const char* name, const char* config_json, const char* csv_path) {
  if (name == nullptr || csv_path == nullptr) return invalid("name/csv_path must not be NULL");
  return guarded([&] {
    llp::bench::run_experiment_to_files(name, config_json == nullptr ? "" : config_json,
                                        csv_path);
  });
}

}  // extern "C"
