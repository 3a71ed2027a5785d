/*
 * Copyright 2026 The homodyne authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libhomodyne: homodyne spectra of open quantum systems.
 *
 * All functions returning hd_status leave a thread-local message behind on
 * failure, readable with hd_last_error(). Matrices cross the boundary as
 * separate real and imaginary arrays of dim*dim doubles in column-major order.
 */

#ifndef HOMODYNE_H
#define HOMODYNE_H

#include <stddef.h>
#include <stdint.h>

#if defined(HOMODYNE_BUILDING_LIBRARY)
#define HD_API __attribute__((visibility("default")))
#else
#define HD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hd_status {
  HD_OK = 0,
  HD_INVALID_ARGUMENT = 1,
  HD_VALIDATION = 2,
  HD_NUMERICAL = 3,
  HD_PARSE = 4,
  HD_IO = 5,
  HD_INTERNAL = 6
} hd_status;

typedef struct hd_model hd_model;
typedef struct hd_curve hd_curve;
typedef struct hd_bound_report hd_bound_report;

typedef struct hd_two_level_params {
  double gamma;
  double p;
  double nbar;
  double kd;
  double omega_rabi;
  double delta_omega;
} hd_two_level_params;

/* Local oscillator. has_nu == 0 locks the frequency to the laser. */
typedef struct hd_quadrature {
  double theta;
  int has_nu;
  double nu;
} hd_quadrature;

typedef struct hd_evolution_config {
  double step;
  int renormalize;
} hd_evolution_config;

typedef struct hd_sim_config {
  double dt;
  double horizon;
  size_t n_traj;
  uint64_t seed;
  unsigned threads; /* 0: HOMODYNE_THREADS or hardware concurrency */
} hd_sim_config;

typedef enum hd_bound_source { HD_SOURCE_ANALYTIC = 0, HD_SOURCE_FINITE_T = 1 } hd_bound_source;

typedef struct hd_bound_sample {
  double mu;
  double theta;
  double s_inel;
  double s_inel_conj;
  double pair_sum;
  double product;
} hd_bound_sample;

typedef struct hd_squeezing_region {
  double theta;
  double mu_lo;
  double mu_hi;
  double min_value;
  double argmin_mu;
  int conjugate_above_one;
} hd_squeezing_region;

/* Called once per dumped trajectory, in index order. */
typedef void (*hd_trajectory_callback)(void* user, size_t index, double dt,
                                       const double* increments, size_t count);

HD_API const char* hd_version(void);
HD_API const char* hd_last_error(void);
HD_API const char* hd_status_name(hd_status status);

HD_API hd_evolution_config hd_evolution_config_default(void);
HD_API hd_sim_config hd_sim_config_default(void);

/* Models */
HD_API hd_status hd_model_load(const char* path, hd_model** out);
HD_API hd_status hd_model_parse(const char* text, hd_model** out);
HD_API hd_status hd_model_two_level(const hd_two_level_params* params, hd_model** out);
HD_API void hd_model_free(hd_model* model);
HD_API hd_status hd_model_validate(const hd_model* model);
HD_API size_t hd_model_dim(const hd_model* model);
HD_API int hd_model_is_two_level(const hd_model* model);
HD_API hd_status hd_model_get_two_level(const hd_model* model, hd_two_level_params* out);
/* Parsed key = value entries, in file order. */
HD_API size_t hd_model_entry_count(const hd_model* model);
HD_API hd_status hd_model_entry(const hd_model* model, size_t index, const char** key,
                                const char** value);

/* Closed-form two-level results */
HD_API hd_status hd_analytic_inelastic(const hd_two_level_params* params, double theta,
                                       const double* mu, size_t n, double* out);
HD_API hd_status hd_analytic_elastic_weight(const hd_two_level_params* params, double theta,
                                            double* out);
HD_API hd_status hd_analytic_equilibrium(const hd_two_level_params* params, double* bloch3,
                                         double* rho_re, double* rho_im);
HD_API hd_status hd_analytic_curve(const hd_two_level_params* params, double theta,
                                   const double* mu, size_t n, hd_curve** out);

/* Master-equation dynamics */
HD_API hd_status hd_steady_state(const hd_model* model, double* rho_re, double* rho_im);
HD_API hd_status hd_evolve(const hd_model* model, const double* rho0_re, const double* rho0_im,
                           double t0, double t1, const hd_evolution_config* cfg,
                           double* out_re, double* out_im);

/* Spectra. The *_from variants take the initial state explicitly; the
 * others start from the steady state. */
HD_API hd_status hd_spectrum_finite(const hd_model* model, const hd_quadrature* q,
                                    double horizon, const double* mu, size_t n,
                                    const hd_evolution_config* cfg, hd_curve** out);
HD_API hd_status hd_spectrum_finite_from(const hd_model* model, const hd_quadrature* q,
                                         const double* rho0_re, const double* rho0_im,
                                         double horizon, const double* mu, size_t n,
                                         const hd_evolution_config* cfg, hd_curve** out);
HD_API hd_status hd_spectrum_monte_carlo(const hd_model* model, const hd_quadrature* q,
                                         const double* rho0_re, const double* rho0_im,
                                         const hd_sim_config* cfg, const double* mu, size_t n,
                                         size_t dump_count, hd_trajectory_callback callback,
                                         void* user, hd_curve** out);

HD_API void hd_curve_free(hd_curve* curve);
HD_API size_t hd_curve_size(const hd_curve* curve);
HD_API const double* hd_curve_mu(const hd_curve* curve);
HD_API const double* hd_curve_total(const hd_curve* curve);
HD_API const double* hd_curve_elastic(const hd_curve* curve);
HD_API const double* hd_curve_inelastic(const hd_curve* curve);
/* NULL unless the curve comes from Monte Carlo. */
HD_API const double* hd_curve_stderr_total(const hd_curve* curve);
HD_API const double* hd_curve_stderr_inelastic(const hd_curve* curve);
HD_API double hd_curve_horizon(const hd_curve* curve);
HD_API double hd_curve_elastic_delta_weight(const hd_curve* curve);
HD_API const char* hd_curve_provenance(const hd_curve* curve);
HD_API hd_status hd_curve_check(const hd_curve* curve);

/* Bounds and squeezing */
HD_API hd_status hd_theta_grid(size_t n, double* out);
HD_API hd_status hd_uniform_grid(double lo, double hi, size_t n, double* out);
HD_API hd_status hd_check_bounds(const hd_model* model, hd_bound_source source,
                                 const double* mu, size_t n_mu, const double* theta,
                                 size_t n_theta, double horizon,
                                 const hd_evolution_config* cfg, hd_bound_report** out);
HD_API void hd_bound_report_free(hd_bound_report* report);
HD_API void hd_bound_report_minima(const hd_bound_report* report, double* pair_sum_min,
                                   double* product_min, double* pair_sum_min_minus,
                                   double* product_min_minus);
HD_API size_t hd_bound_report_violation_count(const hd_bound_report* report);
HD_API hd_status hd_bound_report_violation(const hd_bound_report* report, size_t index,
                                           double* mu, double* theta, double* value,
                                           const char** bound);
HD_API size_t hd_bound_report_squeezing_count(const hd_bound_report* report);
HD_API hd_status hd_bound_report_squeezing(const hd_bound_report* report, size_t index,
                                           hd_squeezing_region* out);
HD_API size_t hd_bound_report_sample_count(const hd_bound_report* report);
HD_API hd_status hd_bound_report_sample(const hd_bound_report* report, size_t index,
                                        hd_bound_sample* out);

#ifdef __cplusplus
}
#endif

#endif /* HOMODYNE_H */
