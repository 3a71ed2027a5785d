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

#include "helpers.hpp"

#include "homodyne/bounds.hpp"
#include "homodyne/error.hpp"
#include "homodyne/spectrum.hpp"

#include <doctest.h>

using namespace homodyne;
using namespace testing;

namespace {

/// Model whose output channel is identically zero.
SystemModel silent_output() {
  SystemModel m = pure_decay();
  m.channels.insert(m.channels.begin(), ComplexMatrix::Zero(2, 2));
  m.labels.insert(m.labels.begin(), "dark");
  m.drive = DriveFunction::zero(2);
  m.hamiltonian = 0.4 * pauli(Pauli::x);
  return m;
}

double sup_relative(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return worst;
}

}  // namespace

TEST_CASE("output operator") {
  const SystemModel decay = pure_decay(2.0);
  const QuadratureParams q{0.3, 1.7};
  const ComplexMatrix z = output_operator(decay, q, 0.5);
  CHECK((z - std::exp(Complex(0, 1.7 * 0.5 + 0.3)) * decay.channels[0]).norm() < 1e-15);

  const SystemModel lab = two_level_lab_model(fig1_params(), 4.5);
  const ComplexMatrix zl = output_operator(lab, QuadratureParams{0.2, 1.0}, 2.0);
  CHECK((zl - std::exp(Complex(0, 2.2)) * std::sqrt(0.8) * pauli(Pauli::minus)).norm() < 1e-15);

  // Drive entering through a non-trivial scattering row.
  SystemModel mixed = frozen(1);
  mixed.channels = {ComplexMatrix::Constant(1, 1, 0.5), ComplexMatrix::Constant(1, 1, 0.1)};
  mixed.labels = {"a", "b"};
  const double c = std::sqrt(0.5);
  for (double v : {c, c, c, -c}) mixed.scattering.push_back(ComplexMatrix::Constant(1, 1, v));
  mixed.drive = DriveFunction::monochromatic({0.0, Complex(0, 2.0)}, {0.0, 0.0});
  const ComplexMatrix z0 = output_operator(mixed, QuadratureParams{0.0, 1.0}, 0.0);
  CHECK(std::abs(z0(0, 0) - (0.5 + c * Complex(0, 2.0))) < 1e-15);
}

TEST_CASE("locked local oscillator in the laser frame") {
  const SystemModel m = two_level_model(fig1_params());
  CHECK(output_phase_rate(m, QuadratureParams{0.0, {}}) == 0.0);
  CHECK(output_phase_rate(m, QuadratureParams{0.0, 1.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(output_phase_rate(pure_decay(), QuadratureParams{0.0, {}}), Error);
  CHECK_THROWS_AS(validate(QuadratureParams{0.0, -1.0}), Error);
}

TEST_CASE("mean current") {
  for (const auto& p : {fig1_params(), fig2_params()}) {
    const SystemModel m = two_level_model(p);
    const DensityMatrix rho = equilibrium(p).rho;
    for (double th : {-2.0, 0.0, 1.1}) {
      const double expected = std::sqrt(p.gamma * p.p) * (sigma_theta(th) * rho.matrix()).trace().real();
      CHECK(mean_current(m, {th, {}}, rho, 0.0) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
  CHECK(mean_current(pure_decay(), {0.4, 1.0}, DensityMatrix(ground()), 0.7) == 0.0);
  CHECK(mean_current(silent_output(), {0.4, 1.0}, DensityMatrix(excited()), 0.7) == 0.0);
}

TEST_CASE("autocorrelation kernel") {
  const EvolutionConfig cfg{1e-3, true};
  std::mt19937_64 rng(8);
  CHECK(autocorrelation_kernel(silent_output(), {0.2, 1.0}, 0.1, 0.9, random_state(rng, 2), cfg) == 0.0);

  const SystemModel m = two_level_model(fig1_params());
  const QuadratureParams q{0.6, {}};
  const DensityMatrix eta = random_state(rng, 2);
  ComplexMatrix z = output_operator(m, q, 0.0);
  z -= (z * eta.matrix()).trace() * ComplexMatrix::Identity(2, 2);
  const double direct =
      ((z + z.adjoint()) * (z * eta.matrix() + eta.matrix() * z.adjoint())).trace().real();
  CHECK(autocorrelation_kernel(m, q, 0.0, 0.0, eta, cfg) == doctest::Approx(direct).epsilon(1e-12));

  const DensityMatrix eq = steady_state(m);
  const double k1 = autocorrelation_kernel(m, q, 0.2, 1.4, eq, cfg);
  const double k2 = autocorrelation_kernel(m, q, 3.0, 4.2, eq, cfg);
  CHECK(std::abs(k1 - k2) <= 1e-8);

  const StationarySpectrum s(m, std::nullopt, 2.0, {0.0}, cfg);
  const auto kernel = s.kernel(0.6);
  const std::size_t n = std::size_t(std::llround(1.2 / s.step()));
  CHECK(kernel[n] == doctest::Approx(k1).epsilon(1e-8));
}

TEST_CASE("elastic finite spectrum") {
  const EvolutionConfig cfg{1e-3, true};
  const std::vector<double> mu{-1.3, 0.0, 0.05, 2.0};
  std::mt19937_64 rng(9);
  for (double v : spectrum_elastic_finite(silent_output(), {0.1, 1.0}, random_state(rng, 2), 5.0, mu, cfg))
    CHECK(v == 0.0);

  const TwoLevelParams p = fig1_params();
  const SystemModel m = two_level_model(p);
  const DensityMatrix eq = steady_state(m);
  const QuadratureParams q{0.4, {}};
  const double mean = mean_current(m, q, eq, 0.0);
  const double horizon = 30.0;
  const auto el = spectrum_elastic_finite(m, q, eq, horizon, mu, cfg);
  CHECK(el[1] == doctest::Approx(horizon * mean * mean).epsilon(1e-10));
  for (std::size_t i : {0u, 2u, 3u}) {
    const double f = mu[i];
    const double exact = 4.0 * mean * mean * std::pow(std::sin(f * horizon / 2), 2) / (f * f * horizon);
    CHECK(std::abs(el[i] - exact) <= 1e-6 * horizon * mean * mean);
  }
  const StationarySpectrum s(m, std::nullopt, horizon, mu, cfg);
  const auto sel = s.elastic(0.4);
  for (std::size_t i = 0; i < mu.size(); ++i) CHECK(std::abs(sel[i] - el[i]) <= 1e-9 * horizon);
}

TEST_CASE("inelastic finite spectrum: trivial cases") {
  const EvolutionConfig cfg{1e-3, true};
  const auto mu = uniform_grid(-4.0, 4.0, 9);
  std::mt19937_64 rng(12);
  for (double v : spectrum_inelastic_finite(silent_output(), {0.3, 1.0}, random_state(rng, 2), 5.0, mu, cfg))
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const SystemModel undriven = two_level_model(undriven_params());
  for (double th : {-1.0, 0.0, 2.0}) {
    for (double v : spectrum_inelastic_finite(undriven, {th, {}}, DensityMatrix(ground()), 50.0, mu, cfg))
      CHECK(std::abs(v - 1.0) <= 1e-9);
  }
}

TEST_CASE("stationary finite-T spectrum approaches the closed form") {
  const EvolutionConfig cfg{1e-3, true};
  const auto mu = uniform_grid(-5.0, 5.0, 101);
  const TwoLevelParams p = fig1_params();
  const StationarySpectrum s(two_level_model(p), std::nullopt, 100.0, mu, cfg);
  const TwoLevelSpectrum exact(p);
  for (double th : {-2.5, -0.8, 0.0, 0.9, 2.2}) {
    CHECK(sup_relative(s.inelastic(th), exact.inelastic(th, mu)) <= 0.02);
  }
}

TEST_CASE("stationary finite-T spectrum on random two-level parameters") {
  const EvolutionConfig cfg{1e-3, true};
  const auto mu = uniform_grid(-5.0, 5.0, 41);
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> pd(0.1, 0.9), nd(0.0, 0.5), kd(0.0, 0.3), om(0.0, 4.0),
      dw(-4.0, 4.0), th(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    TwoLevelParams p;
    p.p = pd(rng);
    p.nbar = nd(rng);
    p.kd = kd(rng);
    p.omega_rabi = om(rng);
    p.delta_omega = dw(rng);
    const double theta = th(rng);
    const StationarySpectrum s(two_level_model(p), std::nullopt, 200.0, mu, cfg);
    const double err = sup_relative(s.inelastic(theta), TwoLevelSpectrum(p).inelastic(theta, mu));
    CHECK_MESSAGE(err <= 0.02, "trial " << trial);
  }
}

TEST_CASE("finite-T spectrum is flat far from resonance") {
  const EvolutionConfig cfg{1e-3, true};
  const SystemModel m = two_level_model(fig1_params());
  const std::vector<double> mu{-100.0, 100.0};
  const auto v = spectrum_inelastic_finite(m, {0.3, {}}, steady_state(m), 20.0, mu, cfg);
  CHECK(std::abs(v[0] - 1.0) <= 0.05);
  CHECK(std::abs(v[1] - 1.0) <= 0.05);
}

TEST_CASE("generic path agrees with the brute-force double integral") {
  const EvolutionConfig cfg{5e-3, false};
  std::mt19937_64 rng(31);
  const std::vector<double> mu{-2.0, 0.0, 0.7, 2.0};
  for (int trial = 0; trial < 3; ++trial) {
    const SystemModel m = random_model(rng, trial == 2);
    const DensityMatrix rho0 = random_state(rng, m.dim);
    const QuadratureParams q{0.5 * trial - 0.4, 0.3 * trial + 0.2};
    const double horizon = 3.0;
    const auto fast = spectrum_inelastic_finite(m, q, rho0, horizon, mu, cfg);
    const auto slow = brute_force_inelastic(m, q, rho0, horizon, 800, mu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK_MESSAGE(std::abs(fast[i] - slow[i]) <= 1e-3 * std::max(1.0, std::abs(slow[i])),
                    "trial " << trial << " mu " << mu[i]);
    }
  }
}

TEST_CASE("stationary path agrees with the brute-force double integral") {
  const EvolutionConfig cfg{2e-3, true};
  const SystemModel m = two_level_model(fig1_params());
  const DensityMatrix eq = steady_state(m);
  const std::vector<double> mu{0.0, 1.5, 4.9};
  const auto fast = spectrum_inelastic_finite(m, {0.7, {}}, eq, 4.0, mu, cfg);
  const auto slow = brute_force_inelastic(m, {0.7, {}}, eq, 4.0, 2000, mu);
  for (std::size_t i = 0; i < mu.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) <= 1e-5);
}

TEST_CASE("laboratory frame agrees with the laser frame") {
  const EvolutionConfig cfg{1e-3, true};
  const TwoLevelParams p = fig1_params();
  const SystemModel frame = two_level_model(p, 1.0);
  const SystemModel lab = two_level_lab_model(p, 4.5);
  const DensityMatrix eq = steady_state(frame);
  const std::vector<double> mu{-3.0, 0.0, 1.0, 4.5};
  const double horizon = 8.0;
  const auto a = spectrum_finite(frame, {0.3, {}}, eq, horizon, mu, cfg);
  const auto b = spectrum_finite(lab, {0.3, 1.0}, eq, horizon, mu, cfg);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(std::abs(a.inelastic[i] - b.inelastic[i]) <= 1e-6);
    CHECK(std::abs(a.elastic[i] - b.elastic[i]) <= 1e-6);
  }
}

TEST_CASE("nonnegativity and evenness on random models") {
  const EvolutionConfig cfg{1e-2, true};
  const auto mu = uniform_grid(-3.0, 3.0, 13);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemModel m = random_model(rng, trial % 3 == 0);
    const DensityMatrix rho0 = random_state(rng, m.dim);
    const QuadratureParams q{-kPi + 0.6 * trial, 0.5};
    SpectrumCurve c;
    REQUIRE_NOTHROW(c = spectrum_finite(m, q, rho0, 4.0, mu, cfg));
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(c.elastic[i] >= -kCurveTolerance);
      CHECK(c.inelastic[i] >= -kCurveTolerance);
      CHECK(std::abs(c.total[i] - c.total[mu.size() - 1 - i]) <= kCurveTolerance);
    }
  }
}

TEST_CASE("assemble_curve") {
  const QuadratureParams q{0.0, {}};
  const auto c = assemble_curve({-1.0, 0.0, 1.0}, {0, 0, 0}, {1, 1, 1}, 10.0, q, Provenance::finite_t);
  for (double v : c.total) CHECK(v == 1.0);
  CHECK(to_string(c.provenance) == "finite_t");
  try {
    (void)assemble_curve({-1.0, 0.0, 1.0}, {0, 0, 0}, {1, -0.1, 1}, 10.0, q, Provenance::finite_t);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("mu = 0") != std::string::npos);
  }
  CHECK_THROWS_AS(assemble_curve({-1.0, 0.0, 1.0}, {0, 0, 0}, {1, 1, 1.1}, 10.0, q, Provenance::finite_t), Error);
  CHECK_NOTHROW(assemble_curve({0.0, 1.0, 2.0}, {0, 0, 0}, {1, 1, 1.1}, 10.0, q, Provenance::finite_t));
  CHECK_THROWS_AS(assemble_curve({0.0, 1.0}, {0}, {1, 1}, 10.0, q, Provenance::finite_t), Error);

  const auto mu = uniform_grid(-5.0, 5.0, 201);
  const StationarySpectrum s(two_level_model(fig1_params()), std::nullopt, 50.0, mu, {1e-3, true});
  CHECK_NOTHROW(assemble_curve(mu, s.elastic(0.3), s.inelastic(0.3), 50.0, {0.3, {}}, Provenance::finite_t));
}

TEST_CASE("quadrature step rules") {
  const SystemModel m = two_level_model(fig1_params());
  const std::vector<double> mu{-20.0, 20.0};
  CHECK(quadrature_step(m, {0.0, {}}, mu, {1.0, true}) <= 0.1 / 20.0 + 1e-15);
  CHECK(quadrature_step(pure_decay(4.0), {0.0, 0.1}, std::vector<double>{0.1}, {1.0, true}) ==
        doctest::Approx(0.01 / 4.0));
  CHECK(quadrature_step(m, {0.0, {}}, std::vector<double>{0.0}, {1e-4, true}) == 1e-4);
}
