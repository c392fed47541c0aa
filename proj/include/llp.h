/* C interface to the LLP library: learning from label proportions with
 * variance-reduced bag-level square-loss estimators.
 *
 * Conventions:
 *   - every function returns an llp_status; outputs go through pointers;
 *   - objects are opaque handles created by *_create / *_sample and released
 *     by the matching *_free (free functions accept NULL);
 *   - on failure, llp_last_error() returns a thread-local description of the
 *     most recent error on the calling thread;
 *   - tabular hypotheses are passed as arrays of predictions aligned with the
 *     atom order of the distribution they are defined on.
 */
#ifndef LLP_H_
#define LLP_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum llp_status {
  LLP_OK = 0,
  LLP_ERR_INVALID_ARGUMENT = 1, /* bad inputs, dimension mismatches, ... */
  LLP_ERR_MISSING_MARGINAL = 2, /* a required (p, E[h(x)]) entry is absent */
  LLP_ERR_PRECONDITION = 3,     /* a documented algorithm guard failed */
  LLP_ERR_TOO_LARGE = 4,        /* enumeration guard exceeded */
  LLP_ERR_IO = 5,               /* file read/write failure */
  LLP_ERR_INTERNAL = 6
} llp_status;

/* Library version string, e.g. "0.1.0". */
const char* llp_version(void);

/* Description of the last error raised on this thread ("" if none). */
const char* llp_last_error(void);

/* ------------------------------------------------------------------------ */
/* Finite distributions                                                      */
/* ------------------------------------------------------------------------ */

typedef struct llp_dist llp_dist;

/* support atoms with features of dimension dim (row-major support x dim),
 * nonnegative masses summing to 1 (drift <= 1e-9 is renormalized) and
 * conditional positive probabilities etas in [0, 1]. */
llp_status llp_dist_create(size_t support, size_t dim, const double* features,
                           const double* masses, const double* etas, llp_dist** out);
void llp_dist_free(llp_dist* dist);

size_t llp_dist_support(const llp_dist* dist);
size_t llp_dist_dim(const llp_dist* dist);

/* E[y] = sum mass(x) eta(x). */
llp_status llp_dist_label_marginal(const llp_dist* dist, double* out);

/* E[h(x)] for a tabular hypothesis given by h_values[support]. */
llp_status llp_dist_prediction_mean(const llp_dist* dist, const double* h_values, double* out);

/* ------------------------------------------------------------------------ */
/* Bagged samples                                                            */
/* ------------------------------------------------------------------------ */

typedef struct llp_bags llp_bags;

/* Draws n i.i.d. examples from dist, shuffles them by seed and partitions
 * them into floor(n/k) bags of size k (leftovers dropped). Deterministic in
 * (dist, n, k, seed). */
llp_status llp_bags_sample(const llp_dist* dist, size_t n, size_t k, uint64_t seed,
                           llp_bags** out);
void llp_bags_free(llp_bags* bags);

size_t llp_bags_count(const llp_bags* bags);
size_t llp_bags_bag_size(const llp_bags* bags);
llp_status llp_bags_alpha(const llp_bags* bags, size_t index, double* out);

/* ------------------------------------------------------------------------ */
/* Bag-level losses                                                          */
/* ------------------------------------------------------------------------ */

typedef enum llp_loss_kind {
  LLP_LOSS_OURS_UNCLIPPED = 0,
  LLP_LOSS_OURS_CLIPPED = 1,
  LLP_LOSS_LI = 2,
  LLP_LOSS_EASYLLP = 3,
  LLP_LOSS_VANILLA_SQ = 4,
  LLP_LOSS_VANILLA_CE = 5
} llp_loss_kind;

typedef enum llp_threshold_mode {
  LLP_THRESHOLD_KNOWN = 0,    /* sqrt(8 k ln(2/theta)) */
  LLP_THRESHOLD_ESTIMATED = 1 /* sqrt(18 k ln(6/theta)) */
} llp_threshold_mode;

/* Evaluates one aggregate loss on a single bag from the model's per-example
 * predictions h_values[k], the bag's label proportion alpha, the label
 * marginal p and the model's mean prediction. theta/mode only apply to
 * LLP_LOSS_OURS_CLIPPED; clamp_eps (<= 0 selects the 1e-7 default) only to
 * the cross-entropy variants. clipped (optional) is set to 1 when a clipping
 * indicator zeroed the quadratic term. */
llp_status llp_bag_loss(llp_loss_kind kind, size_t k, const double* h_values, double alpha,
                        double p, double mean_prediction, double theta, llp_threshold_mode mode,
                        double clamp_eps, double* value, int* clipped);

/* Debiased bag-level square loss for a linear model and its gradient:
 *   value = k (w.(xbar - mu_x) - (alpha - mu_y))^2 + (w.mu_x - mu_y)^2
 * with xbar the centroid of bag_features[k*dim]. grad may be NULL. */
llp_status llp_linear_bag_loss_grad(size_t dim, size_t k, const double* w,
                                    const double* bag_features, double alpha, const double* mu_x,
                                    double mu_y, double* value, double* grad);

/* ------------------------------------------------------------------------ */
/* Learners                                                                  */
/* ------------------------------------------------------------------------ */

/* Two-hypothesis selection from bagged data; h1_values/h2_values are tabular
 * over dist. delta = E[h1 - h2], beta = E[(h1 - h2)^2]. chosen gets 1 or 2. */
llp_status llp_select_two(const llp_dist* dist, const llp_bags* bags, const double* h1_values,
                          const double* h2_values, double delta, double beta, int* chosen);

/* ERM with the clipped bag-level square loss over n_hypotheses tabular
 * hypotheses (h_table is n_hypotheses x support, row-major). use_split = 0
 * computes exact marginals from dist and uses the Known threshold; otherwise
 * the last m2 bags (m2 = 0 -> ceil(m/2)) estimate the marginals and training
 * runs on the rest with the Estimated threshold. chosen_index gets the row
 * index of the empirical minimizer (ties to the lowest index). */
llp_status llp_erm_fit(const llp_dist* dist, const llp_bags* bags, const double* h_table,
                       size_t n_hypotheses, double theta, int use_split, size_t m2,
                       int* chosen_index);

/* Theorem constants for the SGD run; see llp_sgd_train. */
llp_status llp_sgd_derive_constants(size_t k, size_t m, double rho_w, double rho_x, double rho_y,
                                    double l_star, double* theta, double* zeta, double* eta);

/* Truncated projected SGD on the bag-level square loss for linear models.
 * Writes the averaged iterate into w_out[dim]; skipped (optional) receives
 * the number of truncated updates. Pass has_*_override = 1 to replace the
 * derived step size / truncation threshold. */
llp_status llp_sgd_train(const llp_bags* bags, size_t dim, const double* mu_x, double mu_y,
                         double rho_w, double rho_x, double rho_y, double l_star,
                         int has_eta_override, double eta_override, int has_theta_override,
                         double theta_override, double* w_out, size_t* skipped);

/* ------------------------------------------------------------------------ */
/* Experiment harness                                                        */
/* ------------------------------------------------------------------------ */

/* Runs the named experiment ("variance", "warmup", "erm", "sgd") from a JSON
 * config (NULL or "" = defaults), writing the CSV to csv_path and a config
 * snapshot next to it. See README for the config schemas. */
llp_status llp_run_experiment(const char* name, const char* config_json, const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* LLP_H_ */
