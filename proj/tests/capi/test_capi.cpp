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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homodyne.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

hd_two_level_params fig1() { return {1.0, 0.8, 0.0, 0.0, 3.7021, 3.5}; }
hd_two_level_params undriven() { return {1.0, 0.8, 0.0, 0.0, 0.0, 0.0}; }

struct Dumps {
  std::vector<size_t> index;
  std::vector<size_t> count;
};

void record(void* user, size_t index, double, const double*, size_t count) {
  auto* d = static_cast<Dumps*>(user);
  d->index.push_back(index);
  d->count.push_back(count);
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(hd_status_name(HD_OK)) == "ok");
  CHECK(std::strlen(hd_version()) > 0);
  const hd_evolution_config e = hd_evolution_config_default();
  CHECK(e.step == 1e-3);
  CHECK(e.renormalize == 1);
  const hd_sim_config s = hd_sim_config_default();
  CHECK(s.n_traj >= 1);
}

TEST_CASE("model handles") {
  hd_model* m = nullptr;
  const hd_two_level_params p = fig1();
  REQUIRE(hd_model_two_level(&p, &m) == HD_OK);
  CHECK(hd_model_dim(m) == 2);
  CHECK(hd_model_is_two_level(m) == 1);
  CHECK(hd_model_validate(m) == HD_OK);
  hd_two_level_params back{};
  CHECK(hd_model_get_two_level(m, &back) == HD_OK);
  CHECK(back.omega_rabi == 3.7021);
  hd_model_free(m);

  hd_model* bad = nullptr;
  CHECK(hd_model_parse("twolevel.p = 1.5\n", &bad) == HD_VALIDATION);
  CHECK(bad == nullptr);
  CHECK(std::string(hd_last_error()).size() > 0);
  CHECK(hd_model_parse("no equals sign\n", &bad) == HD_PARSE);
  CHECK(hd_model_load("/nonexistent/model.cfg", &bad) == HD_IO);
  CHECK(hd_model_two_level(nullptr, &bad) == HD_INVALID_ARGUMENT);

  hd_model* parsed = nullptr;
  REQUIRE(hd_model_parse("twolevel.omega_rabi = 0.5\ntwolevel.delta_omega = 1\n", &parsed) == HD_OK);
  CHECK(hd_model_entry_count(parsed) == 2);
  const char* key = nullptr;
  const char* value = nullptr;
  CHECK(hd_model_entry(parsed, 1, &key, &value) == HD_OK);
  CHECK(std::string(key) == "twolevel.delta_omega");
  CHECK(hd_model_entry(parsed, 2, &key, &value) == HD_INVALID_ARGUMENT);
  hd_model_free(parsed);
  hd_model_free(nullptr);
}

TEST_CASE("analytic functions") {
  const hd_two_level_params p = fig1();
  double mu[3] = {-1.0, 0.0, 1.0};
  double out[3];
  REQUIRE(hd_analytic_inelastic(&p, 0.3, mu, 3, out) == HD_OK);
  CHECK(out[0] == doctest::Approx(out[2]).epsilon(1e-12));
  double w = -1.0;
  CHECK(hd_analytic_elastic_weight(&p, 0.3, &w) == HD_OK);
  CHECK(w > 0.0);
  double x[3], re[4], im[4];
  CHECK(hd_analytic_equilibrium(&p, x, re, im) == HD_OK);
  CHECK(re[0] + re[3] == doctest::Approx(1.0));

  const hd_two_level_params u = undriven();
  hd_curve* c = nullptr;
  REQUIRE(hd_analytic_curve(&u, 0.0, mu, 3, &c) == HD_OK);
  CHECK(hd_curve_size(c) == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(std::abs(hd_curve_inelastic(c)[i] - 1.0) <= 1e-12);
  CHECK(std::string(hd_curve_provenance(c)) == "analytic");
  CHECK(hd_curve_stderr_total(c) == nullptr);
  CHECK(hd_curve_check(c) == HD_OK);
  hd_curve_free(c);

  hd_two_level_params bad = p;
  bad.gamma = -1.0;
  CHECK(hd_analytic_inelastic(&bad, 0.0, mu, 3, out) == HD_INVALID_ARGUMENT);
}

TEST_CASE("dynamics and finite-T spectra") {
  hd_model* m = nullptr;
  const hd_two_level_params p = fig1();
  REQUIRE(hd_model_two_level(&p, &m) == HD_OK);
  double re[4], im[4];
  REQUIRE(hd_steady_state(m, re, im) == HD_OK);
  double x[3], are[4], aim[4];
  hd_analytic_equilibrium(&p, x, are, aim);
  for (int i = 0; i < 4; ++i) {
    CHECK(re[i] == doctest::Approx(are[i]).epsilon(1e-9));
    CHECK(im[i] == doctest::Approx(aim[i]).epsilon(1e-9));
  }
  const double e_re[4] = {1, 0, 0, 0};
  const double e_im[4] = {0, 0, 0, 0};
  double out_re[4], out_im[4];
  const hd_evolution_config cfg = hd_evolution_config_default();
  CHECK(hd_evolve(m, e_re, e_im, 0.0, 50.0, &cfg, out_re, out_im) == HD_OK);
  CHECK(out_re[0] == doctest::Approx(re[0]).epsilon(1e-6));

  double mu[5];
  REQUIRE(hd_uniform_grid(-2.0, 2.0, 5, mu) == HD_OK);
  const hd_quadrature q{0.4, 0, 0.0};
  hd_curve* c = nullptr;
  REQUIRE(hd_spectrum_finite(m, &q, 20.0, mu, 5, &cfg, &c) == HD_OK);
  CHECK(hd_curve_horizon(c) == 20.0);
  CHECK(std::string(hd_curve_provenance(c)) == "finite_t");
  CHECK(hd_curve_total(c)[0] == doctest::Approx(hd_curve_total(c)[4]).epsilon(1e-9));
  hd_curve_free(c);

  REQUIRE(hd_spectrum_finite_from(m, &q, e_re, e_im, 5.0, mu, 5, &cfg, &c) == HD_OK);
  hd_curve_free(c);

  const double not_state[4] = {2, 0, 0, 0};
  CHECK(hd_spectrum_finite_from(m, &q, not_state, e_im, 5.0, mu, 5, &cfg, &c) == HD_VALIDATION);
  CHECK(hd_spectrum_finite(m, &q, -1.0, mu, 5, &cfg, &c) == HD_INVALID_ARGUMENT);
  hd_model_free(m);
}

TEST_CASE("Monte Carlo through the C interface") {
  hd_model* m = nullptr;
  const hd_two_level_params p = undriven();
  REQUIRE(hd_model_two_level(&p, &m) == HD_OK);
  double mu[3] = {-1.0, 0.0, 1.0};
  const hd_quadrature q{0.0, 0, 0.0};
  hd_sim_config cfg = hd_sim_config_default();
  cfg.dt = 1e-2;
  cfg.horizon = 5.0;
  cfg.n_traj = 50;
  cfg.seed = 3;
  Dumps d;
  hd_curve* c = nullptr;
  REQUIRE(hd_spectrum_monte_carlo(m, &q, nullptr, nullptr, &cfg, mu, 3, 2, record, &d, &c) == HD_OK);
  CHECK(std::string(hd_curve_provenance(c)) == "monte_carlo");
  REQUIRE(hd_curve_stderr_inelastic(c) != nullptr);
  CHECK(hd_curve_stderr_inelastic(c)[1] > 0.0);
  CHECK(d.index == std::vector<size_t>{0, 1});
  CHECK(d.count == std::vector<size_t>{500, 500});
  hd_curve_free(c);

  cfg.n_traj = 1;
  CHECK(hd_spectrum_monte_carlo(m, &q, nullptr, nullptr, &cfg, mu, 3, 0, nullptr, nullptr, &c) ==
        HD_INVALID_ARGUMENT);
  hd_model_free(m);
}

TEST_CASE("bound reports") {
  hd_model* m = nullptr;
  const hd_two_level_params p = fig1();
  REQUIRE(hd_model_two_level(&p, &m) == HD_OK);
  std::vector<double> mu(201), theta(16);
  hd_uniform_grid(-10.0, 10.0, mu.size(), mu.data());
  REQUIRE(hd_theta_grid(theta.size(), theta.data()) == HD_OK);
  const hd_evolution_config cfg = hd_evolution_config_default();
  hd_bound_report* r = nullptr;
  REQUIRE(hd_check_bounds(m, HD_SOURCE_ANALYTIC, mu.data(), mu.size(), theta.data(), theta.size(),
                          0.0, &cfg, &r) == HD_OK);
  double a, b, c, d;
  hd_bound_report_minima(r, &a, &b, &c, &d);
  CHECK(b >= 1.0 - 1e-9);
  CHECK(hd_bound_report_violation_count(r) == 0);
  CHECK(hd_bound_report_squeezing_count(r) > 0);
  hd_squeezing_region reg{};
  CHECK(hd_bound_report_squeezing(r, 0, &reg) == HD_OK);
  CHECK(reg.min_value < 1.0);
  CHECK(reg.conjugate_above_one == 1);
  CHECK(hd_bound_report_sample_count(r) == mu.size() * theta.size());
  hd_bound_sample s{};
  CHECK(hd_bound_report_sample(r, 0, &s) == HD_OK);
  CHECK(s.product == doctest::Approx(s.s_inel * s.s_inel_conj));
  CHECK(hd_bound_report_sample(r, mu.size() * theta.size(), &s) == HD_INVALID_ARGUMENT);
  hd_bound_report_free(r);

  std::vector<double> coarse(21);
  hd_uniform_grid(-5.0, 5.0, coarse.size(), coarse.data());
  REQUIRE(hd_check_bounds(m, HD_SOURCE_FINITE_T, coarse.data(), coarse.size(), theta.data(), 4,
                          20.0, &cfg, &r) == HD_OK);
  CHECK(hd_bound_report_violation_count(r) == 0);
  hd_bound_report_free(r);
  hd_model* general = nullptr;
  REQUIRE(hd_model_parse("dim = 1\nhamiltonian = 0\n", &general) == HD_OK);
  CHECK(hd_check_bounds(general, HD_SOURCE_ANALYTIC, mu.data(), mu.size(), theta.data(), 2, 0.0,
                        &cfg, &r) == HD_INVALID_ARGUMENT);
  hd_model_free(general);
  hd_model_free(m);
}
