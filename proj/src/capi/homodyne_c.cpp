// Copyright 2026 The homodyne authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "homodyne.h"

#include "homodyne/bounds.hpp"
#include "homodyne/error.hpp"
#include "homodyne/evolution.hpp"
#include "homodyne/model_io.hpp"
#include "homodyne/spectrum.hpp"
#include "homodyne/trajectory.hpp"
#include "homodyne/two_level.hpp"

#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

struct hd_model {
  homodyne::ModelDescription desc;
};

struct hd_curve {
  homodyne::SpectrumCurve curve;
  std::string provenance;
};

struct hd_bound_report {
  homodyne::BoundReport report;
};

namespace {

thread_local std::string g_last_error;

hd_status fail(hd_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

hd_status status_of(homodyne::ErrorKind kind) {
  switch (kind) {
    case homodyne::ErrorKind::invalid_argument: return HD_INVALID_ARGUMENT;
    case homodyne::ErrorKind::validation: return HD_VALIDATION;
    case homodyne::ErrorKind::numerical: return HD_NUMERICAL;
    case homodyne::ErrorKind::parse: return HD_PARSE;
    case homodyne::ErrorKind::io: return HD_IO;
  }
  return HD_INTERNAL;
}

template <class Fn>
hd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HD_OK;
  } catch (const homodyne::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HD_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HD_INTERNAL, e.what());
  } catch (...) {
    return fail(HD_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw homodyne::Error(homodyne::ErrorKind::invalid_argument, what);
}

homodyne::TwoLevelParams to_params(const hd_two_level_params* p) {
  require(p != nullptr, "null parameters");
  homodyne::TwoLevelParams out{p->gamma, p->p, p->nbar, p->kd, p->omega_rabi, p->delta_omega};
  homodyne::validate(out);
  return out;
}

hd_two_level_params from_params(const homodyne::TwoLevelParams& p) {
  return {p.gamma, p.p, p.nbar, p.kd, p.omega_rabi, p.delta_omega};
}

homodyne::QuadratureParams to_quadrature(const hd_quadrature* q) {
  require(q != nullptr, "null quadrature");
  homodyne::QuadratureParams out;
  out.theta = q->theta;
  if (q->has_nu) out.nu = q->nu;
  homodyne::validate(out);
  return out;
}

homodyne::EvolutionConfig to_evolution(const hd_evolution_config* cfg) {
  homodyne::EvolutionConfig out;
  if (cfg) {
    out.step = cfg->step;
    out.renormalize = cfg->renormalize != 0;
  }
  homodyne::validate(out);
  return out;
}

std::vector<double> to_vector(const double* data, std::size_t n) {
  require(data != nullptr || n == 0, "null array");
  return std::vector<double>(data, data + n);
}

homodyne::ComplexMatrix to_matrix(const double* re, const double* im, Eigen::Index dim) {
  require(re != nullptr && im != nullptr, "null matrix");
  homodyne::ComplexMatrix m(dim, dim);
  for (Eigen::Index k = 0; k < dim * dim; ++k) m.data()[k] = {re[k], im[k]};
  return m;
}

void from_matrix(const homodyne::ComplexMatrix& m, double* re, double* im) {
  require(re != nullptr && im != nullptr, "null output matrix");
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    re[k] = m.data()[k].real();
    im[k] = m.data()[k].imag();
  }
}

const homodyne::SystemModel& model_of(const hd_model* model) {
  require(model != nullptr, "null model");
  return model->desc.model;
}

homodyne::DensityMatrix initial_state(const homodyne::SystemModel& model, const double* re,
                                      const double* im) {
  if (re == nullptr && im == nullptr) return homodyne::steady_state(model);
  return homodyne::DensityMatrix(to_matrix(re, im, model.dim));
}

void emit(homodyne::SpectrumCurve curve, hd_curve** out) {
  require(out != nullptr, "null output");
  auto* handle = new hd_curve{std::move(curve), {}};
  handle->provenance = homodyne::to_string(handle->curve.provenance);
  *out = handle;
}

const double* data_or_null(const std::vector<double>& v) {
  return v.empty() ? nullptr : v.data();
}

}  // namespace

extern "C" {

const char* hd_version(void) { return "0.1.0"; }

const char* hd_last_error(void) { return g_last_error.c_str(); }

const char* hd_status_name(hd_status status) {
  switch (status) {
    case HD_OK: return "ok";
    case HD_INVALID_ARGUMENT: return "invalid argument";
    case HD_VALIDATION: return "validation";
    case HD_NUMERICAL: return "numerical";
    case HD_PARSE: return "parse";
    case HD_IO: return "io";
    case HD_INTERNAL: return "internal";
  }
  return "unknown";
}

hd_evolution_config hd_evolution_config_default(void) {
  const homodyne::EvolutionConfig cfg;
  return {cfg.step, cfg.renormalize ? 1 : 0};
}

hd_sim_config hd_sim_config_default(void) {
  const homodyne::SimConfig cfg;
  return {cfg.dt, cfg.horizon, cfg.n_traj, cfg.seed, cfg.threads};
}

hd_status hd_model_load(const char* path, hd_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new hd_model{homodyne::load_model(path)};
  });
}

hd_status hd_model_parse(const char* text, hd_model** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new hd_model{homodyne::parse_model(text)};
  });
}

hd_status hd_model_two_level(const hd_two_level_params* params, hd_model** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto p = to_params(params);
    *out = new hd_model{{homodyne::two_level_model(p), p, {}}};
  });
}

void hd_model_free(hd_model* model) { delete model; }

hd_status hd_model_validate(const hd_model* model) {
  return guarded([&] { homodyne::require_valid(model_of(model)); });
}

size_t hd_model_dim(const hd_model* model) {
  return model ? static_cast<size_t>(model->desc.model.dim) : 0;
}

int hd_model_is_two_level(const hd_model* model) {
  return model && model->desc.two_level ? 1 : 0;
}

hd_status hd_model_get_two_level(const hd_model* model, hd_two_level_params* out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    require(model->desc.two_level.has_value(), "model is not a two-level description");
    *out = from_params(*model->desc.two_level);
  });
}

size_t hd_model_entry_count(const hd_model* model) {
  return model ? model->desc.entries.size() : 0;
}

hd_status hd_model_entry(const hd_model* model, size_t index, const char** key,
                         const char** value) {
  return guarded([&] {
    require(model != nullptr && key != nullptr && value != nullptr, "null argument");
    require(index < model->desc.entries.size(), "entry index out of range");
    *key = model->desc.entries[index].first.c_str();
    *value = model->desc.entries[index].second.c_str();
  });
}

hd_status hd_analytic_inelastic(const hd_two_level_params* params, double theta,
                                const double* mu, size_t n, double* out) {
  return guarded([&] {
    require(out != nullptr || n == 0, "null output");
    const homodyne::TwoLevelSpectrum spec(to_params(params));
    const auto grid = to_vector(mu, n);
    const auto values = spec.inelastic(theta, grid);
    std::copy(values.begin(), values.end(), out);
  });
}

hd_status hd_analytic_elastic_weight(const hd_two_level_params* params, double theta,
                                     double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = homodyne::elastic_weight(to_params(params), theta);
  });
}

hd_status hd_analytic_equilibrium(const hd_two_level_params* params, double* bloch3,
                                  double* rho_re, double* rho_im) {
  return guarded([&] {
    const auto eq = homodyne::equilibrium(to_params(params));
    if (bloch3) {
      for (int k = 0; k < 3; ++k) bloch3[k] = eq.x[k];
    }
    if (rho_re || rho_im) from_matrix(eq.rho.matrix(), rho_re, rho_im);
  });
}

hd_status hd_analytic_curve(const hd_two_level_params* params, double theta, const double* mu,
                            size_t n, hd_curve** out) {
  return guarded([&] {
    const homodyne::TwoLevelSpectrum spec(to_params(params));
    auto grid = to_vector(mu, n);
    auto inel = spec.inelastic(theta, grid);
    homodyne::QuadratureParams q;
    q.theta = theta;
    auto curve = homodyne::assemble_curve(std::move(grid), std::vector<double>(n, 0.0),
                                          std::move(inel), 0.0, q,
                                          homodyne::Provenance::analytic);
    curve.elastic_delta_weight = spec.elastic_weight(theta);
    emit(std::move(curve), out);
  });
}

hd_status hd_steady_state(const hd_model* model, double* rho_re, double* rho_im) {
  return guarded([&] {
    from_matrix(homodyne::steady_state(model_of(model)).matrix(), rho_re, rho_im);
  });
}

hd_status hd_evolve(const hd_model* model, const double* rho0_re, const double* rho0_im,
                    double t0, double t1, const hd_evolution_config* cfg, double* out_re,
                    double* out_im) {
  return guarded([&] {
    const auto& m = model_of(model);
    const homodyne::DensityMatrix rho0(to_matrix(rho0_re, rho0_im, m.dim));
    from_matrix(homodyne::evolve_state(m, rho0, t0, t1, to_evolution(cfg)).matrix(), out_re,
                out_im);
  });
}

hd_status hd_spectrum_finite(const hd_model* model, const hd_quadrature* q, double horizon,
                             const double* mu, size_t n, const hd_evolution_config* cfg,
                             hd_curve** out) {
  return hd_spectrum_finite_from(model, q, nullptr, nullptr, horizon, mu, n, cfg, out);
}

hd_status hd_spectrum_finite_from(const hd_model* model, const hd_quadrature* q,
                                  const double* rho0_re, const double* rho0_im, double horizon,
                                  const double* mu, size_t n, const hd_evolution_config* cfg,
                                  hd_curve** out) {
  return guarded([&] {
    const auto& m = model_of(model);
    const auto params = to_quadrature(q);
    const auto rho0 = initial_state(m, rho0_re, rho0_im);
    const auto grid = to_vector(mu, n);
    emit(homodyne::spectrum_finite(m, params, rho0, horizon, grid, to_evolution(cfg)), out);
  });
}

hd_status hd_spectrum_monte_carlo(const hd_model* model, const hd_quadrature* q,
                                  const double* rho0_re, const double* rho0_im,
                                  const hd_sim_config* cfg, const double* mu, size_t n,
                                  size_t dump_count, hd_trajectory_callback callback, void* user,
                                  hd_curve** out) {
  return guarded([&] {
    require(cfg != nullptr, "null simulation config");
    const auto& m = model_of(model);
    const auto params = to_quadrature(q);
    const auto rho0 = initial_state(m, rho0_re, rho0_im);
    const auto grid = to_vector(mu, n);
    const homodyne::SimConfig sim{cfg->dt, cfg->horizon, cfg->n_traj, cfg->seed, cfg->threads};
    homodyne::TrajectoryHook hook;
    if (callback) {
      hook = [&](std::size_t index, const homodyne::Trajectory& traj) {
        callback(user, index, traj.dt, traj.increments.data(), traj.increments.size());
      };
    }
    emit(homodyne::monte_carlo_spectrum(m, params, rho0, sim, grid, hook,
                                        callback ? dump_count : 0),
         out);
  });
}

void hd_curve_free(hd_curve* curve) { delete curve; }
size_t hd_curve_size(const hd_curve* c) { return c ? c->curve.mu.size() : 0; }
const double* hd_curve_mu(const hd_curve* c) { return c ? data_or_null(c->curve.mu) : nullptr; }
const double* hd_curve_total(const hd_curve* c) {
  return c ? data_or_null(c->curve.total) : nullptr;
}
const double* hd_curve_elastic(const hd_curve* c) {
  return c ? data_or_null(c->curve.elastic) : nullptr;
}
const double* hd_curve_inelastic(const hd_curve* c) {
  return c ? data_or_null(c->curve.inelastic) : nullptr;
}
const double* hd_curve_stderr_total(const hd_curve* c) {
  return c ? data_or_null(c->curve.stderr_total) : nullptr;
}
const double* hd_curve_stderr_inelastic(const hd_curve* c) {
  return c ? data_or_null(c->curve.stderr_inelastic) : nullptr;
}
double hd_curve_horizon(const hd_curve* c) { return c ? c->curve.horizon : 0.0; }
double hd_curve_elastic_delta_weight(const hd_curve* c) {
  return c ? c->curve.elastic_delta_weight : 0.0;
}
const char* hd_curve_provenance(const hd_curve* c) { return c ? c->provenance.c_str() : ""; }

hd_status hd_curve_check(const hd_curve* curve) {
  return guarded([&] {
    require(curve != nullptr, "null curve");
    homodyne::check_curve(curve->curve);
  });
}

hd_status hd_theta_grid(size_t n, double* out) {
  return guarded([&] {
    require(out != nullptr || n == 0, "null output");
    const auto grid = homodyne::theta_grid(n);
    std::copy(grid.begin(), grid.end(), out);
  });
}

hd_status hd_uniform_grid(double lo, double hi, size_t n, double* out) {
  return guarded([&] {
    require(out != nullptr || n == 0, "null output");
    const auto grid = homodyne::uniform_grid(lo, hi, n);
    std::copy(grid.begin(), grid.end(), out);
  });
}

hd_status hd_check_bounds(const hd_model* model, hd_bound_source source, const double* mu,
                          size_t n_mu, const double* theta, size_t n_theta, double horizon,
                          const hd_evolution_config* cfg, hd_bound_report** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto& m = model_of(model);
    const auto mu_grid = to_vector(mu, n_mu);
    const auto theta_grid = to_vector(theta, n_theta);
    homodyne::BoundReport report;
    if (source == HD_SOURCE_ANALYTIC) {
      require(model->desc.two_level.has_value(),
              "analytic spectrum needs a two-level model description");
      const homodyne::TwoLevelSpectrum spec(*model->desc.two_level);
      report = homodyne::check_bounds(
          [&](double th) { return spec.inelastic(th, mu_grid); }, mu_grid, theta_grid);
    } else if (source == HD_SOURCE_FINITE_T) {
      const homodyne::StationarySpectrum spec(m, std::nullopt, horizon, mu_grid,
                                              to_evolution(cfg));
      report = homodyne::check_bounds([&](double th) { return spec.inelastic(th); }, mu_grid,
                                      theta_grid);
    } else {
      require(false, "unknown spectrum source");
    }
    *out = new hd_bound_report{std::move(report)};
  });
}

void hd_bound_report_free(hd_bound_report* report) { delete report; }

void hd_bound_report_minima(const hd_bound_report* r, double* pair_sum_min, double* product_min,
                            double* pair_sum_min_minus, double* product_min_minus) {
  if (!r) return;
  if (pair_sum_min) *pair_sum_min = r->report.pair_sum_min;
  if (product_min) *product_min = r->report.product_min;
  if (pair_sum_min_minus) *pair_sum_min_minus = r->report.pair_sum_min_minus;
  if (product_min_minus) *product_min_minus = r->report.product_min_minus;
}

size_t hd_bound_report_violation_count(const hd_bound_report* r) {
  return r ? r->report.violations.size() : 0;
}

hd_status hd_bound_report_violation(const hd_bound_report* r, size_t index, double* mu,
                                    double* theta, double* value, const char** bound) {
  return guarded([&] {
    require(r != nullptr && index < r->report.violations.size(), "violation index out of range");
    const auto& v = r->report.violations[index];
    if (mu) *mu = v.mu;
    if (theta) *theta = v.theta;
    if (value) *value = v.value;
    if (bound) *bound = v.bound.c_str();
  });
}

size_t hd_bound_report_squeezing_count(const hd_bound_report* r) {
  return r ? r->report.squeezing_regions.size() : 0;
}

hd_status hd_bound_report_squeezing(const hd_bound_report* r, size_t index,
                                    hd_squeezing_region* out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null argument");
    require(index < r->report.squeezing_regions.size(), "region index out of range");
    const auto& s = r->report.squeezing_regions[index];
    *out = {s.theta, s.mu_lo, s.mu_hi, s.min_value, s.argmin_mu, s.conjugate_above_one ? 1 : 0};
  });
}

size_t hd_bound_report_sample_count(const hd_bound_report* r) {
  return r ? r->report.samples.size() : 0;
}

hd_status hd_bound_report_sample(const hd_bound_report* r, size_t index, hd_bound_sample* out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null argument");
    require(index < r->report.samples.size(), "sample index out of range");
    const auto& s = r->report.samples[index];
    *out = {s.mu, s.theta, s.s_inel, s.s_inel_conj, s.pair_sum, s.product};
  });
}

}  // extern "C"
